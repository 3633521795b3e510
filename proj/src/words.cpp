#include "adsanosov/reps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <tuple>

namespace ads {

const char* to_string(BaseKind k) {
  switch (k) {
    case BaseKind::fuchsian_lattice: return "fuchsian-lattice";
    case BaseKind::deformed: return "deformed";
    case BaseKind::product: return "product";
    case BaseKind::custom: return "custom";
  }
  return "custom";
}

BaseKind base_kind_from(std::string_view s) {
  if (s == "fuchsian-lattice") return BaseKind::fuchsian_lattice;
  if (s == "deformed") return BaseKind::deformed;
  if (s == "product") return BaseKind::product;
  if (s == "custom" || s.empty()) return BaseKind::custom;
  throw Error(ErrorKind::bad_input, "unknown base kind '" + std::string(s) + "'");
}

int Representation::index_of(char c) const {
  const char lo = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].size() == 1 && labels[i][0] == lo) return static_cast<int>(i);
  throw Error(ErrorKind::bad_input, std::string("unknown generator letter '") + c + "'");
}

namespace {
bool is_inverse_letter(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

Mat letter_from(const std::vector<Mat>& gens, int i, bool inv, bool so1n) {
  if (!inv) return gens[i];
  if (so1n) {
    const auto d = gens[i].rows();
    Mat J = Mat::Identity(d, d);
    J(0, 0) = -1.0;
    return J * gens[i].transpose() * J;
  }
  return group_inverse(gens[i]);
}
}  // namespace

Mat Representation::letter(char c) const {
  return letter_from(gens, index_of(c), is_inverse_letter(c), false);
}

Mat Representation::base_letter(char c) const {
  if (base.empty()) throw Error(ErrorKind::bad_input, "representation has no base structure");
  return letter_from(base, index_of(c), is_inverse_letter(c), true);
}

Mat Representation::evaluate(std::string_view w) const {
  Mat m = Mat::Identity(n + 2, n + 2);
  for (char c : w) m = m * letter(c);
  return m;
}

Mat Representation::evaluate_base(std::string_view w) const {
  if (base.empty()) throw Error(ErrorKind::bad_input, "representation has no base structure");
  Mat m = Mat::Identity(base[0].rows(), base[0].rows());
  for (char c : w) m = m * base_letter(c);
  return m;
}

double relator_residual(const Representation& rep, std::string_view w) {
  const Mat m = rep.evaluate(w);
  return (m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

void validate(const Representation& rep) {
  if (rep.n < 2 || rep.n > 3) throw Error(ErrorKind::bad_input, "n must be 2 or 3");
  if (rep.gens.empty()) throw Error(ErrorKind::bad_input, "no generators");
  if (rep.labels.size() != rep.gens.size()) throw Error(ErrorKind::bad_input, "labels/generators size mismatch");
  for (std::size_t i = 0; i < rep.labels.size(); ++i) {
    const auto& l = rep.labels[i];
    if (l.size() != 1 || !std::islower(static_cast<unsigned char>(l[0])))
      throw Error(ErrorKind::bad_input, "labels must be single lowercase letters");
    for (std::size_t j = 0; j < i; ++j)
      if (rep.labels[j] == l) throw Error(ErrorKind::bad_input, "duplicate label " + l);
    const auto& g = rep.gens[i];
    if (g.rows() != rep.n + 2 || g.cols() != rep.n + 2)
      throw Error(ErrorKind::bad_input, "generator " + l + " has wrong size");
    membership_check(g, l);
  }
  for (const auto& r : rep.relators) {
    for (char c : r) rep.index_of(c);
    const double res = relator_residual(rep, r);
    if (!(res <= 1e-6))
      throw Error(ErrorKind::invariant, "relator " + r + " residual " + std::to_string(res));
  }
  if (!rep.base.empty()) {
    if (rep.base.size() != rep.gens.size()) throw Error(ErrorKind::bad_input, "base size mismatch");
    for (const auto& b : rep.base) {
      if (b.rows() != rep.n + 1 || b.cols() != rep.n + 1)
        throw Error(ErrorKind::bad_input, "base generator has wrong size");
      Mat J = Mat::Identity(rep.n + 1, rep.n + 1);
      J(0, 0) = -1.0;
      if ((b.transpose() * J * b - J).cwiseAbs().maxCoeff() > kGroupTol * std::max(1.0, b.squaredNorm()))
        throw Error(ErrorKind::bad_input, "base generator does not preserve q_{1,n}");
    }
  }
}

std::string inverse_word(std::string_view w) {
  std::string r(w.rbegin(), w.rend());
  for (char& c : r)
    c = std::isupper(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                                                     : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

std::string reduce_word(std::string_view w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() != c &&
        std::tolower(static_cast<unsigned char>(out.back())) == std::tolower(static_cast<unsigned char>(c)))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::vector<WordElement> enumerate_words(const std::vector<std::string>& labels, const std::vector<Mat>& gens,
                                         int R, std::size_t cap, double dedup_tol) {
  if (R < 0 || R > 16) throw Error(ErrorKind::bad_input, "word radius must be in [0, 16]");
  if (labels.size() != gens.size() || gens.empty()) throw Error(ErrorKind::bad_input, "bad generator list");
  const auto d = gens[0].rows();

  // letters a, A, b, B, ...
  struct Letter {
    char c;
    Mat m;
  };
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const char lo = labels[i][0];
    letters.push_back({lo, gens[i]});
    // inverse through the matrix itself; works for any group here
    letters.push_back({static_cast<char>(std::toupper(static_cast<unsigned char>(lo))), gens[i].inverse()});
  }

  // Fixed functional for the proximity index.
  Mat wts(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) wts(i, j) = 1.0 + 0.37 * static_cast<double>(i) + 0.113 * static_cast<double>(j * j);
  const double wsum = wts.cwiseAbs().sum();

  std::vector<WordElement> out;
  std::multimap<double, std::size_t> index;
  auto try_add = [&](std::string w, Mat m) -> bool {
    const double key = (wts.array() * m.array()).sum();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double tol = dedup_tol * scale;
    const double r = tol * wsum;
    for (auto it = index.lower_bound(key - r); it != index.end() && it->first <= key + r; ++it)
      if ((out[it->second].m - m).cwiseAbs().maxCoeff() <= tol) return false;
    if (out.size() >= cap)
      throw Error(ErrorKind::bad_input, "word ball exceeds memory guard (" + std::to_string(cap) + " elements)");
    index.emplace(key, out.size());
    out.push_back({std::move(w), std::move(m)});
    return true;
  };

  try_add(std::string{}, Mat::Identity(d, d));
  std::size_t level_begin = 0, level_end = out.size();
  for (int L = 1; L <= R; ++L) {
    for (std::size_t k = level_begin; k < level_end; ++k) {
      for (const auto& lt : letters) {
        const std::string& w = out[k].word;
        if (!w.empty()) {
          const char last = w.back();
          if (last != lt.c && std::tolower(static_cast<unsigned char>(last)) == std::tolower(static_cast<unsigned char>(lt.c)))
            continue;
        }
        Mat m = out[k].m * lt.m;
        try_add(w + lt.c, std::move(m));
      }
    }
    level_begin = level_end;
    level_end = out.size();
    if (level_begin == level_end) break;
  }
  return out;
}

void for_each_reduced_word(const std::vector<std::string>& labels, const std::vector<Mat>& gens, int R,
                           const std::function<void(const std::string&, const Mat&)>& f) {
  if (R < 0 || R > 16) throw Error(ErrorKind::bad_input, "word radius must be in [0, 16]");
  std::vector<std::pair<char, Mat>> letters;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const char lo = labels[i][0];
    letters.emplace_back(lo, gens[i]);
    letters.emplace_back(static_cast<char>(std::toupper(static_cast<unsigned char>(lo))), gens[i].inverse());
  }
  std::string w;
  std::vector<Mat> stack{Mat::Identity(gens[0].rows(), gens[0].rows())};
  auto rec = [&](auto&& self) -> void {
    f(w, stack.back());
    if (static_cast<int>(w.size()) == R) return;
    for (const auto& [c, m] : letters) {
      if (!w.empty() && w.back() != c &&
          std::tolower(static_cast<unsigned char>(w.back())) == std::tolower(static_cast<unsigned char>(c)))
        continue;
      w.push_back(c);
      stack.push_back(stack.back() * m);
      self(self);
      stack.pop_back();
      w.pop_back();
    }
  };
  rec(rec);
}

WordScan top_lambda_words(const Representation& rep, const std::string& letters, int R, std::size_t keep) {
  if (keep == 0) throw Error(ErrorKind::bad_input, "keep must be positive");
  std::vector<std::string> labels;
  std::vector<Mat> gens;
  for (char c : letters) {
    const int i = rep.index_of(c);
    labels.push_back(rep.labels[i]);
    gens.push_back(rep.gens[i]);
  }
  if (labels.empty()) throw Error(ErrorKind::bad_input, "empty letter set");
  using Item = std::tuple<double, double, std::string>;  // lambda, mu, word; min-heap on lambda
  auto cmp = [](const Item& a, const Item& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) > std::get<0>(b) : std::get<2>(a) > std::get<2>(b);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  WordScan sc;
  for_each_reduced_word(labels, gens, R, [&](const std::string& w, const Mat& m) {
    if (w.empty()) return;
    ++sc.scanned;
    const auto ct = cartan_decompose(m);
    Item it{ct.lambda, ct.mu, w};
    if (heap.size() < keep) heap.push(std::move(it));
    else if (cmp(it, heap.top())) {
      heap.pop();
      heap.push(std::move(it));
    }
  });
  std::vector<Item> items;
  while (!heap.empty()) {
    items.push_back(heap.top());
    heap.pop();
  }
  std::reverse(items.begin(), items.end());
  for (auto& [l, m, w] : items) {
    sc.words.push_back(w);
    sc.lambda.push_back(l);
    sc.mu.push_back(m);
    sc.max_gap = std::max(sc.max_gap, m - l);
  }
  return sc;
}

std::vector<WordElement> word_ball(const Representation& rep, int R, std::size_t cap) {
  return enumerate_words(rep.labels, rep.gens, R, cap);
}

std::vector<WordElement> base_word_ball(const Representation& rep, int R, std::size_t cap) {
  if (rep.base.empty()) throw Error(ErrorKind::bad_input, "representation has no base structure");
  return enumerate_words(rep.labels, rep.base, R, cap);
}

Mat fuchsian_embed_matrix(const Mat& g) {
  const auto d = g.rows();
  if (g.cols() != d || d < 3) throw Error(ErrorKind::bad_input, "SO(1,n) matrix must be square of size >= 3");
  Mat J = Mat::Identity(d, d);
  J(0, 0) = -1.0;
  if ((g.transpose() * J * g - J).cwiseAbs().maxCoeff() > kGroupTol * std::max(1.0, g.squaredNorm()))
    throw Error(ErrorKind::bad_input, "matrix does not preserve q_{1,n}");
  Mat G = Mat::Zero(d + 1, d + 1);
  auto idx = [](Eigen::Index i) { return i == 0 ? Eigen::Index{0} : i + 1; };
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) G(idx(i), idx(j)) = g(i, j);
  G(1, 1) = 1.0;
  return G;
}

Representation fuchsian_embed(const std::vector<Mat>& gens, std::vector<std::string> labels,
                              std::vector<std::string> relators) {
  if (gens.empty()) throw Error(ErrorKind::bad_input, "no generators");
  Representation rep;
  rep.n = static_cast<int>(gens[0].rows()) - 1;
  rep.labels = std::move(labels);
  rep.relators = std::move(relators);
  rep.base = gens;
  rep.kind = BaseKind::fuchsian_lattice;
  for (const auto& g : gens) rep.gens.push_back(fuchsian_embed_matrix(g));
  validate(rep);
  return rep;
}

Mat matrix_of_vector(const Vec& u) {
  Mat M(2, 2);
  M << u(0) + u(2), u(3) - u(1), u(3) + u(1), u(0) - u(2);
  return M;
}

Vec vector_of_matrix(const Mat& M) {
  Vec u(4);
  u(0) = 0.5 * (M(0, 0) + M(1, 1));
  u(1) = 0.5 * (M(1, 0) - M(0, 1));
  u(2) = 0.5 * (M(0, 0) - M(1, 1));
  u(3) = 0.5 * (M(0, 1) + M(1, 0));
  return u;
}

namespace {
void check_sl2(const Mat& A) {
  if (A.rows() != 2 || A.cols() != 2) throw Error(ErrorKind::bad_input, "factor matrix must be 2x2");
  if (std::abs(A.determinant() - 1.0) > 1e-8) throw Error(ErrorKind::bad_input, "factor matrix must have det 1");
}
}  // namespace

Mat product_embed_matrix(const Mat& A, const Mat& B) {
  check_sl2(A);
  check_sl2(B);
  Mat G(4, 4);
  for (int j = 0; j < 4; ++j) {
    Vec e = Vec::Zero(4);
    e(j) = 1.0;
    G.col(j) = vector_of_matrix(A * matrix_of_vector(e) * B.transpose());
  }
  return G;
}

Representation product_embed(const std::vector<Mat>& left, const std::vector<Mat>& right,
                             std::vector<std::string> labels, std::vector<std::string> relators) {
  if (left.size() != right.size() || left.empty()) throw Error(ErrorKind::bad_input, "product factor lists mismatch");
  Representation rep;
  rep.n = 2;
  rep.labels = std::move(labels);
  rep.relators = std::move(relators);
  rep.product = ProductData{left, right};
  rep.kind = BaseKind::product;
  for (std::size_t i = 0; i < left.size(); ++i) {
    rep.gens.push_back(product_embed_matrix(left[i], right[i]));
    rep.base.push_back(sl2_to_so12(left[i]));
  }
  validate(rep);
  return rep;
}

Mat sl2_to_so12(const Mat& A) {
  check_sl2(A);
  // (t, x, y) <-> [[t + x, y], [y, t - x]]
  auto S = [](const Vec& v) {
    Mat m(2, 2);
    m << v(0) + v(1), v(2), v(2), v(0) - v(1);
    return m;
  };
  Mat G(3, 3);
  for (int j = 0; j < 3; ++j) {
    Vec e = Vec::Zero(3);
    e(j) = 1.0;
    const Mat m = A * S(e) * A.transpose();
    G(0, j) = 0.5 * (m(0, 0) + m(1, 1));
    G(1, j) = 0.5 * (m(0, 0) - m(1, 1));
    G(2, j) = 0.5 * (m(0, 1) + m(1, 0));
  }
  return G;
}

}  // namespace ads

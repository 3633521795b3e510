#include "adsanosov/parallel.hpp"
#include "adsanosov/reps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace ads {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::acausal: return "acausal";
    case Verdict::achronal_not_acausal: return "achronal-not-acausal";
    case Verdict::not_achronal: return "not-achronal";
  }
  return "?";
}

std::vector<Vec> sphere_grid(int k, int count) {
  // points of S^k inside R^{k+1}
  std::vector<Vec> out;
  if (k == 1) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * i / count;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
  } else if (k == 2) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec v(3);
      v << r * std::cos(golden * i), r * std::sin(golden * i), z;
      out.push_back(v);
    }
  } else {
    throw Error(ErrorKind::bad_input, "sphere grid only for S^1, S^2");
  }
  return out;
}

LimitSetSample analyze_sample(int n, std::vector<EinPoint> points, std::vector<std::string> words) {
  if (points.empty()) throw Error(ErrorKind::bad_input, "empty limit-set sample");
  LimitSetSample s;
  s.n = n;
  s.points = std::move(points);
  s.words = std::move(words);
  s.words.resize(s.points.size());
  const std::size_t N = s.points.size();
  s.conf.reserve(N);
  for (const auto& p : s.points) s.conf.push_back(to_conformal(p));
  const double t0 = s.conf[0].theta;
  for (auto& c : s.conf) c.theta = t0 + wrap_angle(c.theta - t0);

  double max_ratio = 0.0, min_sep = 1e300, min_res = 1e300, max_prod = -1e300;
  std::size_t light = 0, timel = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const double d = sphere_distance(s.conf[i].Y, s.conf[j].Y);
      const double dt = std::abs(s.conf[i].theta - s.conf[j].theta);
      min_sep = std::min(min_sep, d);
      min_res = std::min(min_res, std::abs(dt - d));
      max_prod = std::max(max_prod, q_inner(s.points[i].lift, s.points[j].lift));
      const Causal c = causal_relation(s.conf[i], s.conf[j]);
      if (c == Causal::lightlike) ++light;
      if (c == Causal::timelike) ++timel;
      if (d > 1e-9) max_ratio = std::max(max_ratio, dt / d);
    }
  s.lightlike_pairs = light;
  s.timelike_pairs = timel;
  s.max_ratio = max_ratio;
  s.margin = 1.0 - max_ratio;
  s.min_separation = N > 1 ? min_sep : 0.0;
  s.min_lightlike_residual = min_res;
  s.max_pair_product = max_prod;
  s.verdict = timel > 0 ? Verdict::not_achronal : light > 0 ? Verdict::achronal_not_acausal : Verdict::acausal;

  // McShane extension onto a grid of the boundary sphere.
  const int gcount = n == 2 ? 360 : 600;
  const auto grid = sphere_grid(n - 1, gcount);
  const double L = std::min(1.0, max_ratio);
  s.graph.grid.reserve(grid.size());
  for (const auto& g : grid) {
    Vec Y = Vec::Zero(n + 1);
    Y.tail(n) = g;
    double best = 1e300;
    for (std::size_t i = 0; i < N; ++i)
      best = std::min(best, s.conf[i].theta + L * sphere_distance(Y, s.conf[i].Y));
    s.graph.grid.push_back(Y);
    s.graph.theta.push_back(best);
  }
  double lip = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double d = sphere_distance(s.graph.grid[i], s.graph.grid[j]);
      if (d > 1e-12) lip = std::max(lip, std::abs(s.graph.theta[i] - s.graph.theta[j]) / d);
    }
  s.graph.lipschitz = lip;
  return s;
}

LimitSetSample limit_set_sample(const Representation& rep, int R, std::size_t min_points) {
  if (rep.split) return split_limit_set(rep);
  const auto ball = word_ball(rep, R);
  std::vector<std::optional<Vec>> fps(ball.size());
  parallel_for(ball.size(), [&](std::size_t i) {
    if (ball[i].word.empty()) return;
    fps[i] = attracting_fixed_point(ball[i].m);
  });
  std::vector<Vec> pts;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (!fps[i]) continue;
    const Vec& v = *fps[i];
    bool dup = false;
    for (const auto& p : pts)
      if (std::min((p - v).norm(), (p + v).norm()) < 1e-9) { dup = true; break; }
    if (dup) continue;
    pts.push_back(v);
    words.push_back(ball[i].word);
  }
  if (pts.size() < min_points)
    throw Error(ErrorKind::bad_input, "too few loxodromic words for a limit-set sample");
  auto fixed = sign_fix_lifts(pts);
  return analyze_sample(rep.n, std::move(fixed), std::move(words));
}

namespace {
Vec top_eigvec2(const Mat& A) {
  // real eigenvector for the eigenvalue of largest modulus
  const double tr = A.trace();
  const double disc = tr * tr - 4.0 * A.determinant();
  if (disc <= 0.0) throw Error(ErrorKind::bad_input, "factor matrix is not hyperbolic");
  const double l = tr >= 0 ? 0.5 * (tr + std::sqrt(disc)) : 0.5 * (tr - std::sqrt(disc));
  Vec v(2);
  const double b = A(0, 1), c = A(1, 0);
  if (std::abs(b) >= std::abs(l - A(1, 1)) && std::abs(b) > 0) {
    v << b, l - A(0, 0);
  } else if (std::abs(c) > 0 || std::abs(l - A(1, 1)) > 0) {
    v << l - A(1, 1), c;
  } else {
    v << 1.0, 0.0;
  }
  return v.normalized();
}

Mat product_factor(const std::vector<Mat>& f, const Representation& rep, std::string_view w) {
  Mat m = Mat::Identity(2, 2);
  for (char c : w) {
    const int i = rep.index_of(c);
    m = m * (std::isupper(static_cast<unsigned char>(c)) ? Mat(f[i].inverse()) : f[i]);
  }
  return m;
}
}  // namespace

Vec product_fixed_point(const Representation& rep, std::string_view word) {
  if (!rep.product) throw Error(ErrorKind::bad_input, "not a product representation");
  const Vec a = top_eigvec2(product_factor(rep.product->left, rep, word));
  const Vec b = top_eigvec2(product_factor(rep.product->right, rep, word));
  return vector_of_matrix(a * b.transpose()).normalized();
}

std::vector<Vec> hemisphere_grid(int n, int rings, int per_ring) {
  std::vector<Vec> out;
  Vec c = Vec::Zero(n + 1);
  c(0) = 1.0;
  out.push_back(c);
  const auto dirs = sphere_grid(n - 1, per_ring);
  for (int k = 1; k <= rings; ++k) {
    const double phi = 0.5 * std::numbers::pi * k / (rings + 1);
    for (const auto& d : dirs) {
      Vec Y(n + 1);
      Y(0) = std::cos(phi);
      Y.tail(n) = std::sin(phi) * d;
      out.push_back(Y);
    }
  }
  return out;
}

double RegularDomain::eval_plus(const Vec& Y) const {
  double best = 1e300;
  for (std::size_t i = 0; i < theta.size(); ++i) best = std::min(best, theta[i] + sphere_distance(Y, Ys[i]));
  return best;
}

double RegularDomain::eval_minus(const Vec& Y) const {
  double best = -1e300;
  for (std::size_t i = 0; i < theta.size(); ++i) best = std::max(best, theta[i] - sphere_distance(Y, Ys[i]));
  return best;
}

bool RegularDomain::contains(const Conformal& c, double tol) const {
  return eval_minus(c.Y) + tol < c.theta && c.theta < eval_plus(c.Y) - tol;
}

RegularDomain regular_domain_bounds(const LimitSetSample& s, int rings, int per_ring) {
  if (s.points.empty()) throw Error(ErrorKind::bad_input, "empty sample");
  if (s.verdict == Verdict::not_achronal) throw Error(ErrorKind::invariant, "regular domain needs an achronal sample");
  RegularDomain rd;
  for (const auto& c : s.conf) {
    rd.theta.push_back(c.theta);
    rd.Ys.push_back(c.Y);
  }
  rd.grid = hemisphere_grid(s.n, rings, per_ring);
  rd.f_plus.resize(rd.grid.size());
  rd.f_minus.resize(rd.grid.size());
  parallel_for(rd.grid.size(), [&](std::size_t i) {
    rd.f_plus[i] = rd.eval_plus(rd.grid[i]);
    rd.f_minus[i] = rd.eval_minus(rd.grid[i]);
  });
  return rd;
}

namespace {
Mat boost(int dim, int i, int j, double t) {
  Mat m = Mat::Identity(dim, dim);
  m(i, i) = m(j, j) = std::cosh(t);
  m(i, j) = m(j, i) = std::sinh(t);
  return m;
}
}  // namespace

LimitSetSample split_limit_set(const Representation& rep, int points_per_arc) {
  if (!rep.split || rep.n != 2 || rep.split->p != 1 || rep.split->q != 1)
    throw Error(ErrorKind::bad_input, "only the p = q = 1 split construction is supported");
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Vec> P, Q;
  for (double s : {1.0, -1.0}) {
    Vec p = Vec::Zero(4), q = Vec::Zero(4);
    p(0) = r; p(2) = s * r;
    q(1) = r; q(3) = s * r;
    P.push_back(p);
    Q.push_back(q);
  }
  std::vector<Vec> pts;
  std::vector<std::string> words;
  // corners once, then arc interiors
  for (int a = 0; a < 2; ++a) {
    pts.push_back(P[a]);
    words.push_back(a == 0 ? "p+" : "p-");
    pts.push_back(Q[a]);
    words.push_back(a == 0 ? "q+" : "q-");
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 1; k < points_per_arc; ++k) {
        const double s = 0.5 * std::numbers::pi * k / points_per_arc;
        pts.push_back(std::cos(s) * P[a] + std::sin(s) * Q[b]);
        words.push_back(std::string("arc") + (a ? '-' : '+') + (b ? '-' : '+') + ":" + std::to_string(k));
      }
  // the sample must be invariant: check against the generators
  for (const auto& g : rep.gens)
    for (const auto& p : {P[0], P[1], Q[0], Q[1]}) {
      const Vec gp = g * p;
      if (std::abs(gp.normalized().dot(p) - 1.0) > 1e-10)
        throw Error(ErrorKind::invariant, "generator does not preserve the split corners");
    }
  auto fixed = sign_fix_lifts(pts);
  return analyze_sample(rep.n, std::move(fixed), std::move(words));
}

SplitExample nonacausal_example(int n, int p, int q, double rapidity_p, double rapidity_q, int points_per_arc) {
  if (p + q != n) throw Error(ErrorKind::bad_input, "need p + q = n");
  if (n != 2 || p != 1 || q != 1) throw Error(ErrorKind::bad_input, "unsupported (p, q) beyond desk scale");
  SplitExample ex;
  ex.rep.n = 2;
  ex.rep.labels = {"a", "b"};
  ex.rep.gens = {boost(4, 0, 2, rapidity_p), boost(4, 1, 3, rapidity_q)};
  ex.rep.relators = {"abAB"};
  ex.rep.kind = BaseKind::custom;
  ex.rep.split = SplitConstruction{p, q};
  validate(ex.rep);
  ex.sample = split_limit_set(ex.rep, points_per_arc);
  return ex;
}

}  // namespace ads

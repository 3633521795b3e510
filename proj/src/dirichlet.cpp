#include "adsanosov/dirichlet.hpp"

#include "adsanosov/hilbert.hpp"
#include "adsanosov/lie.hpp"
#include "adsanosov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ads {

namespace {

std::vector<std::pair<char, Mat>> letters_of(const Representation& rep, bool base) {
  std::vector<std::pair<char, Mat>> out;
  for (const auto& l : rep.labels) {
    const char lo = l[0];
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(lo)));
    out.emplace_back(lo, base ? rep.base_letter(lo) : rep.letter(lo));
    out.emplace_back(up, base ? rep.base_letter(up) : rep.letter(up));
  }
  return out;
}

bool near_identity(const Mat& m) {
  return (m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff());
}

// Points of the hull boundary: random barycentric points on random facets, in chart normalization.
std::vector<Vec> boundary_samples(const ConvexBody& body, std::size_t count, std::mt19937_64& rng) {
  std::vector<Vec> out;
  std::exponential_distribution<double> Ex(1.0);
  std::uniform_int_distribution<std::size_t> pick(0, body.hull.facets.size() - 1);
  for (int i : body.hull.vertices) out.push_back(body.from_chart(body.chart[i]));
  while (out.size() < count + body.hull.vertices.size()) {
    const auto& f = body.hull.facets[pick(rng)];
    Vec c = Vec::Zero(body.hull.dim);
    double tot = 0.0;
    for (int v : f.verts) {
      const double w = Ex(rng);
      c += w * body.chart[v];
      tot += w;
    }
    out.push_back(body.from_chart(c / tot));
  }
  return out;
}

}  // namespace

double DirichletApprox::excess(const Vec& x) const {
  double m = -std::numeric_limits<double>::infinity();
  const double xn = x.norm();
  for (const auto& e : entries) m = std::max(m, q_inner(x, e.u) / (xn * e.u.norm()));
  return m;
}

DirichletApprox dirichlet_build(const Representation& rep, const ConvexBody& body, const Vec& x0, int R,
                                bool prune, std::size_t prune_samples, unsigned long long seed) {
  if (R < 1) throw Error(ErrorKind::bad_input, "word radius must be >= 1");
  if (std::abs(q_norm2(x0) + 1.0) > 1e-9) throw Error(ErrorKind::bad_input, "basepoint must satisfy q(x0) = -1");
  if (!body.contains(x0, 1e-9)) throw Error(ErrorKind::bad_input, "basepoint is not in the convex hull");
  DirichletApprox a;
  a.n = rep.n;
  a.x0 = x0;
  a.R = R;
  const auto ball = word_ball(rep, R);
  std::vector<HalfSpace> all;
  for (const auto& we : ball) {
    if (we.word.empty() || near_identity(we.m)) continue;
    HalfSpace h{we.word, we.m, we.m * x0 - x0};
    if (!(q_norm2(h.u) > 0.0))
      throw Error(ErrorKind::invariant,
                  "causal basepoint pair: x0 and rho(" + we.word + ") x0 are causally related");
    all.push_back(std::move(h));
  }
  a.candidates = all.size();

  if (prune && !all.empty()) {
    std::mt19937_64 rng(seed);
    const auto ys = boundary_samples(body, prune_samples, rng);
    const Vec x0c = x0 / (-q_inner(x0, body.w));
    std::vector<double> a0(all.size());
    for (std::size_t k = 0; k < all.size(); ++k) a0[k] = q_inner(x0c, all[k].u);
    std::vector<std::vector<int>> hits(ys.size());
    parallel_for(ys.size(), [&](std::size_t i) {
      double best = std::numeric_limits<double>::infinity();
      std::vector<std::pair<double, int>> ts;
      for (std::size_t k = 0; k < all.size(); ++k) {
        const double b = q_inner(ys[i], all[k].u);
        if (!(b > 0.0)) continue;
        const double t = a0[k] / (a0[k] - b);
        ts.emplace_back(t, static_cast<int>(k));
        best = std::min(best, t);
      }
      if (!(best <= 1.0 + 1e-12)) return;
      for (const auto& [t, k] : ts)
        if (t <= best + 1e-9 * std::max(1.0, best)) hits[i].push_back(k);
    });
    std::vector<char> active(all.size(), 0);
    for (const auto& h : hits)
      for (int k : h) active[k] = 1;
    for (std::size_t k = 0; k < all.size(); ++k)
      if (active[k]) a.entries.push_back(all[k]);
  } else {
    a.entries = std::move(all);
  }

  a.moves = a.entries;
  for (const auto& [c, m] : letters_of(rep, false)) {
    if (near_identity(m)) continue;
    a.moves.push_back(HalfSpace{std::string(1, c), m, m * x0 - x0});
  }
  return a;
}

Location locate_domain(const Vec& x, const DirichletApprox& approx) {
  Location loc;
  loc.m = Mat::Identity(x.size(), x.size());
  loc.xi = q_inner(x, approx.x0);
  std::vector<Vec> images;
  images.reserve(approx.moves.size());
  for (const auto& h : approx.moves) images.push_back(h.u + approx.x0);
  Vec y = x;
  while (true) {
    int best = -1;
    double bv = loc.xi;
    for (std::size_t k = 0; k < approx.moves.size(); ++k) {
      const double v = q_inner(y, images[k]);
      if (v > bv + 1e-14 * std::abs(bv)) {
        bv = v;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) break;
    if (++loc.steps > kLocateCap) throw Error(ErrorKind::invariant, "locate_domain did not terminate; word radius too small");
    loc.m = loc.m * approx.moves[best].m;
    loc.word = reduce_word(loc.word + approx.moves[best].word);
    y = group_inverse(loc.m) * x;
    loc.xi = q_inner(y, approx.x0);
  }
  return loc;
}

std::vector<Vec> hull_samples(const ConvexBody& body, std::size_t count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Vec> out;
  const auto& V = body.hull.vertices;
  std::uniform_int_distribution<std::size_t> pick(0, V.size() - 1);
  const Vec cen = body.to_chart(body_basepoint(body));
  while (out.size() < count) {
    // a few random vertices pulled toward the center by a random amount
    Vec c = Vec::Zero(body.hull.dim);
    double tot = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double w = U(rng);
      c += w * body.chart[V[pick(rng)]];
      tot += w;
    }
    const double s = std::pow(U(rng), 0.5) * 0.98;
    c = cen + s * (c / tot - cen);
    const Vec z = body.from_chart(c);
    const double q = q_norm2(z);
    if (!(q < 0.0)) continue;
    out.push_back(z / std::sqrt(-q));
  }
  return out;
}

TilingReport tiling_tests(const DirichletApprox& approx, const ConvexBody& body, std::size_t samples,
                          unsigned long long seed, double wall_tol) {
  TilingReport r;
  r.samples = samples;
  r.wall_tol = wall_tol;
  const auto xs = hull_samples(body, samples, seed);
  std::vector<Mat> inv_moves;
  for (const auto& h : approx.moves) inv_moves.push_back(group_inverse(h.m));
  struct Row {
    bool covered = false;
    std::size_t closed = 0, interior = 0;
    Vec y;
  };
  std::vector<Row> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto loc = locate_domain(xs[i], approx);
    Row& row = rows[i];
    row.y = group_inverse(loc.m) * xs[i];
    const double e0 = approx.excess(row.y);
    row.covered = e0 <= wall_tol;
    if (e0 <= wall_tol) ++row.closed;
    if (e0 < -wall_tol) ++row.interior;
    for (const auto& im : inv_moves) {
      const double e = approx.excess(im * row.y);
      if (e <= wall_tol) ++row.closed;
      if (e < -wall_tol) ++row.interior;
    }
  });
  double sum = 0.0;
  std::vector<Vec> inside;
  for (const auto& row : rows) {
    if (row.covered) {
      ++r.covered;
      inside.push_back(row.y);
    } else {
      ++r.uncovered;
    }
    if (row.interior >= 2) ++r.interior_overlaps;
    if (row.closed >= 2) ++r.boundary_ties;
    r.max_local = std::max(r.max_local, row.closed);
    sum += static_cast<double>(row.closed);
  }
  r.mean_local = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());

  const auto ctx = hull_context(body);
  const std::size_t m = std::min<std::size_t>(inside.size(), 120);
  std::vector<double> rowmax(m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!body.contains(inside[i], 1e-9) || !body.contains(inside[j], 1e-9)) continue;
      try {
        rowmax[i] = std::max(rowmax[i], hilbert_distance_lifted(ctx, inside[i], inside[j]));
      } catch (const Error&) {
      }
    }
  });
  for (double v : rowmax) r.diameter = std::max(r.diameter, v);
  return r;
}

std::vector<GenElement> generating_set(const DirichletApprox& approx) {
  std::vector<GenElement> S;
  for (const auto& e : approx.entries) S.push_back({e.word, e.m});
  const std::size_t n0 = S.size();
  for (std::size_t i = 0; i < n0; ++i) {
    const Mat inv = group_inverse(S[i].m);
    const double tol = 1e-8 * std::max(1.0, inv.cwiseAbs().maxCoeff());
    const bool found = std::any_of(S.begin(), S.end(), [&](const GenElement& g) {
      return (g.m - inv).cwiseAbs().maxCoeff() <= tol;
    });
    if (!found) S.push_back({inverse_word(S[i].word), inv});
  }
  return S;
}

QIFit qi_fit(const DirichletApprox& approx, const ConvexBody& body, const std::vector<GenElement>& S, int RS,
             std::size_t stride) {
  // one representative per inverse pair; enumerate_words adds the inverses
  std::vector<Mat> reps;
  for (const auto& g : S) {
    const Mat inv = group_inverse(g.m);
    const bool dup = std::any_of(reps.begin(), reps.end(), [&](const Mat& r) {
      return (r - inv).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, inv.cwiseAbs().maxCoeff());
    });
    if (!dup) reps.push_back(g.m);
  }
  if (reps.empty() || reps.size() > 26) throw Error(ErrorKind::bad_input, "generating set size out of range");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < reps.size(); ++i) labels.emplace_back(1, static_cast<char>('a' + i));
  const auto ball = enumerate_words(labels, reps, RS, kWordBallCap);
  const auto ctx = hull_context(body);
  QIFit f;
  std::vector<double> s, d;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (ball[i].word.empty() || i % stride != 0) continue;
    const Vec X = ball[i].m * approx.x0;
    if (!body.contains(X, 1e-9)) {
      ++f.skipped;
      continue;
    }
    try {
      d.push_back(hilbert_distance_lifted(ctx, approx.x0, X));
      s.push_back(static_cast<double>(ball[i].word.size()));
    } catch (const Error&) {
      ++f.skipped;
    }
  }
  f.pairs = s.size();
  if (s.size() < 2) throw Error(ErrorKind::certification, "too few orbit pairs inside the hull for a QI fit");
  double sm = 0.0, dm = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sm += s[i];
    dm += d[i];
  }
  sm /= static_cast<double>(s.size());
  dm /= static_cast<double>(s.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sxy += (s[i] - sm) * (d[i] - dm);
    sxx += (s[i] - sm) * (s[i] - sm);
  }
  f.slope = sxx > 0.0 ? sxy / sxx : dm / std::max(sm, 1.0);
  if (!(f.slope > 0.0)) f.slope = dm / std::max(sm, 1.0);
  f.a = std::max(1.0, 1.25 * std::max(f.slope, 1.0 / f.slope));
  f.b = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    f.b = std::max(f.b, d[i] - f.a * s[i]);
    f.b = std::max(f.b, s[i] / f.a - d[i]);
  }
  return f;
}

double minkowski(const Vec& a, const Vec& b) { return b.dot(a) - 2.0 * a(0) * b(0); }

OrbitWalker::OrbitWalker(const Representation& rep, const Vec& base, const Vec& tangent) : rep_(&rep) {
  if (!rep.has_base()) throw Error(ErrorKind::bad_input, "orbit walk needs a base hyperbolic structure");
  const int m = rep.n + 1;
  if (base.size() != m || tangent.size() != m) throw Error(ErrorKind::bad_input, "flow vectors must lie in R^{1,n}");
  o_ = Vec::Zero(m);
  o_(0) = 1.0;
  for (const auto& l : rep.labels) {
    for (char c : {l[0], static_cast<char>(std::toupper(static_cast<unsigned char>(l[0])))}) {
      const Mat h = rep.base_letter(c);
      Mat Jb = Mat::Identity(m, m);
      Jb(0, 0) = -1.0;
      letters_.push_back(c);
      images_.push_back(h * o_);
      inv_.push_back(Jb * h.transpose() * Jb);
    }
  }
  G_ = Mat::Identity(rep.n + 2, rep.n + 2);
  y_ = base;
  eta_ = tangent;
  climb();
}

void OrbitWalker::climb() {
  for (int it = 0;; ++it) {
    if (it > kLocateCap) throw Error(ErrorKind::invariant, "orbit search did not terminate");
    double bv = minkowski(y_, o_);
    int best = -1;
    for (std::size_t j = 0; j < images_.size(); ++j) {
      const double v = minkowski(y_, images_[j]);
      if (v > bv + 1e-12 * std::abs(bv)) {
        bv = v;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) break;
    y_ = inv_[best] * y_;
    eta_ = inv_[best] * eta_;
    const std::size_t len = word_.size();
    word_ = reduce_word(word_ + letters_[best]);
    // cancellation: re-evaluate instead of multiplying back down from a large product
    G_ = word_.size() > len ? Mat(G_ * rep_->letter(letters_[best])) : rep_->evaluate(word_);
  }
  y_ /= std::sqrt(-minkowski(y_, y_));
  eta_ += minkowski(eta_, y_) * y_;
  eta_ /= std::sqrt(minkowski(eta_, eta_));
}

void OrbitWalker::advance(double dt) {
  const double ch = std::cosh(dt), sh = std::sinh(dt);
  const Vec y1 = ch * y_ + sh * eta_;
  eta_ = sh * y_ + ch * eta_;
  y_ = y1;
  t_ += dt;
  climb();
}

BoundaryImage boundary_map_ray(const Representation& rep, const Vec& base, const Vec& tangent, int depth,
                               const Vec& x0) {
  if (depth < 4) throw Error(ErrorKind::bad_input, "depth must be >= 4");
  OrbitWalker w(rep, base, tangent);
  BoundaryImage out;
  std::vector<Vec> dirs;
  for (int k = 1; k <= depth; ++k) {
    w.advance(kBoundaryStep);
    out.words.push_back(w.word());
    const Vec v = w.rho() * x0;
    Vec e(rep.n + 2);
    e.head(2) = v.head(2).normalized();
    e.tail(rep.n) = v.tail(rep.n).normalized();
    dirs.push_back(e / std::sqrt(2.0));
  }
  auto tail = [&](std::size_t end) {
    double r = 0.0;
    for (std::size_t i = end >= 3 ? end - 3 : 0; i < end; ++i) r = std::max(r, (dirs[i] - dirs[end]).norm());
    return r;
  };
  out.residual = tail(dirs.size() - 1);
  const double mid = tail(dirs.size() / 2);
  if (out.residual > 1e-3 && out.residual >= mid)
    throw Error(ErrorKind::invariant, "boundary map stagnated: residual not decreasing");
  out.point = EinPoint{dirs.back()};
  return out;
}

BoundaryImage boundary_map(const Representation& rep, const Vec& xi, int depth, const Vec& x0) {
  if (xi.size() != rep.n || std::abs(xi.norm() - 1.0) > 1e-9)
    throw Error(ErrorKind::bad_input, "ideal point must be a unit vector of R^n");
  Vec o = Vec::Zero(rep.n + 1);
  o(0) = 1.0;
  Vec eta = Vec::Zero(rep.n + 1);
  eta.tail(rep.n) = xi;
  return boundary_map_ray(rep, o, eta, depth, x0);
}

}  // namespace ads

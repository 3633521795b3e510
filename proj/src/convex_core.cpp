#include "adsanosov/convex_core.hpp"

#include "adsanosov/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace ads {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat orth_complement(const Vec& a) {
  Mat A(a.size(), 1);
  A.col(0) = a;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(a.size() - 1);
}

// Set of theta with alpha cos + beta sin + gamma <= 0 intersected into a list of real intervals.
struct Interval {
  double lo, hi;
  int lo_tag, hi_tag;
};

void intersect_arc(std::vector<Interval>& cur, double alpha, double beta, double gamma, int tag) {
  const double R = std::hypot(alpha, beta);
  if (R < 1e-15 * std::max(1.0, std::abs(gamma))) {
    if (gamma > 0.0) cur.clear();
    return;
  }
  const double s = -gamma / R;
  if (s >= 1.0) return;
  if (s < -1.0) {
    cur.clear();
    return;
  }
  const double phi = std::atan2(beta, alpha);
  const double a = std::acos(s);
  // allowed arc: [phi + a, phi + 2pi - a] mod 2pi
  std::vector<Interval> out;
  for (const auto& iv : cur) {
    const double k0 = std::floor((iv.lo - (phi + kTwoPi - a)) / kTwoPi);
    for (double k = k0; phi + a + k * kTwoPi <= iv.hi; k += 1.0) {
      const double lo = phi + a + k * kTwoPi, hi = phi + kTwoPi - a + k * kTwoPi;
      Interval r = iv;
      if (lo > r.lo) { r.lo = lo; r.lo_tag = tag; }
      if (hi < r.hi) { r.hi = hi; r.hi_tag = tag; }
      if (r.lo <= r.hi) out.push_back(r);
    }
  }
  cur = std::move(out);
}

}  // namespace

Vec ConvexBody::to_chart(const Vec& y) const {
  const double s = -q_inner(y, w);
  if (!(s > 0.0)) throw Error(ErrorKind::bad_input, "point outside the affine chart");
  return E.transpose() * (y / s - yc);
}

Vec ConvexBody::from_chart(const Vec& c) const { return yc + E * c; }

bool ConvexBody::contains(const Vec& y, double tol) const { return in_chart(y) && max_violation(y) <= tol; }

double ConvexBody::max_violation(const Vec& y) const {
  const Vec yl = lower(y) / y.norm();
  double m = -1e300;
  for (const auto& v : facet_v) m = std::max(m, yl.dot(v));
  for (const auto& v : equality_v) m = std::max(m, std::abs(yl.dot(v)));
  return m;
}

ConvexBody convex_hull_lifts(int n, std::vector<Vec> lifts, double theta_ref) {
  if (lifts.size() < 2) throw Error(ErrorKind::bad_input, "hull needs at least two points");
  ConvexBody b;
  b.n = n;
  b.theta_ref = theta_ref;
  Vec bar = Vec::Zero(n + 2);
  for (const auto& l : lifts) bar += l;
  bar /= static_cast<double>(lifts.size());
  b.w = bar / bar.norm();
  for (const auto& l : lifts)
    if (!(q_inner(l, b.w) < 0.0)) throw Error(ErrorKind::invariant, "chart failure: sample not in one affine chart");
  const double qw = q_norm2(b.w);
  if (!(qw < 0.0)) throw Error(ErrorKind::invariant, "chart failure: barycenter not timelike");
  b.yc = b.w / std::abs(qw);
  b.E = orth_complement(lower(b.w));
  b.lifts = std::move(lifts);
  for (const auto& l : b.lifts) b.chart.push_back(b.to_chart(l));
  b.hull = convex_hull_points(b.chart);

  const Mat J = gram(n);
  auto lift_cov = [&](const Vec& nrm, double off) {
    const double alpha = (b.E * nrm).dot(b.yc) + off;
    Vec v = J * (b.E * nrm) + alpha * b.w;
    return Vec(v / v.norm());
  };
  for (const auto& f : b.hull.facets) {
    b.facet_v.push_back(lift_cov(f.normal, f.offset));
    int side = 0;
    if (!b.hull.degenerate) {
      Vec c = Vec::Zero(n + 2);
      for (int i : f.verts) c += b.lifts[i];
      Vec T = Vec::Zero(n + 2);
      T(0) = -c(1);
      T(1) = c(0);
      side = q_inner(T, b.facet_v.back()) > 0.0 ? 1 : -1;
    }
    b.facet_side.push_back(side);
  }
  for (int j = 0; j < b.hull.normal_space.cols(); ++j) {
    const Vec m = b.hull.normal_space.col(j);
    b.equality_v.push_back(lift_cov(m, m.dot(b.hull.origin)));
  }

  std::set<std::vector<int>> faces;
  for (const auto& f : b.hull.facets) {
    const int k = static_cast<int>(f.verts.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) < 2) continue;
      std::vector<int> s;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) s.push_back(f.verts[i]);
      std::sort(s.begin(), s.end());
      faces.insert(std::move(s));
    }
  }
  b.faces.assign(faces.begin(), faces.end());
  if (b.degenerate()) {
    Mat L(n + 2, b.hull.vertices.size());
    for (std::size_t i = 0; i < b.hull.vertices.size(); ++i) L.col(i) = b.lifts[b.hull.vertices[i]];
    Eigen::JacobiSVD<Mat> svd(L, Eigen::ComputeThinU);
    b.cell_basis = svd.matrixU().leftCols(std::min<Eigen::Index>(b.hull.affine_dim + 1, L.cols()));
  }
  return b;
}

ConvexBody convex_hull(const LimitSetSample& sample) {
  std::vector<Vec> lifts;
  for (const auto& p : sample.points) lifts.push_back(p.lift);
  return convex_hull_lifts(sample.n, std::move(lifts), sample.conf.empty() ? 0.0 : sample.conf[0].theta);
}

SupportReport support_spacelike_check(const ConvexBody& body) {
  SupportReport r;
  r.facets = body.facet_v.size();
  r.min_minus_q = 1e300;
  for (const auto& v : body.facet_v) {
    const double m = -q_norm2(v);
    r.minus_q.push_back(m);
    r.min_minus_q = std::min(r.min_minus_q, m);
  }
  r.pass = r.facets > 0 && r.min_minus_q > kSpacelikeSupportTol;
  return r;
}

std::optional<ThetaInterval> fiber_interval(const ConvexBody& body, const Vec& A, const Vec& B, const Vec& C,
                                            double eq_tol) {
  // chart half: <u, w> < 0, keep the branch nearest theta_ref
  const double aw = q_inner(A, body.w), bw = q_inner(B, body.w), cw = q_inner(C, body.w);
  const double R = std::hypot(aw, bw);
  if (R < 1e-15) return std::nullopt;
  const double s = -cw / R;
  if (s <= -1.0) return std::nullopt;
  const double phi = std::atan2(bw, aw);
  double center = phi + std::numbers::pi;
  center = body.theta_ref + wrap_angle(center - body.theta_ref);
  const double half = s >= 1.0 ? std::numbers::pi : std::numbers::pi - std::acos(s);
  std::vector<Interval> cur{{center - half, center + half, -1, -1}};
  for (std::size_t f = 0; f < body.facet_v.size() && !cur.empty(); ++f) {
    const Vec& v = body.facet_v[f];
    intersect_arc(cur, q_inner(A, v), q_inner(B, v), q_inner(C, v), static_cast<int>(f));
  }
  for (const auto& v : body.equality_v) {
    if (cur.empty()) break;
    const double a = q_inner(A, v), b = q_inner(B, v), c = q_inner(C, v);
    intersect_arc(cur, a, b, c - eq_tol, -1);
    intersect_arc(cur, -a, -b, -c - eq_tol, -1);
  }
  if (cur.empty()) return std::nullopt;
  ThetaInterval t{cur.front().lo, cur.back().hi, cur.front().lo_tag, cur.back().hi_tag};
  return t;
}

std::optional<ThetaInterval> conformal_fiber(const ConvexBody& body, const Vec& Y) {
  const int m = body.n + 2;
  if (!(Y(0) > 0.0)) throw Error(ErrorKind::bad_input, "fiber needs Y_0 > 0");
  Vec A = Vec::Zero(m), B = Vec::Zero(m), C = Vec::Zero(m);
  A(0) = 1.0 / Y(0);
  B(1) = 1.0 / Y(0);
  C.tail(m - 2) = Y.tail(m - 2) / Y(0);
  return fiber_interval(body, A, B, C);
}

ThetaInterval timelike_intersection(const ConvexBody& body, const Mat& P) {
  if (P.cols() != 2) throw Error(ErrorKind::bad_input, "line must be given by two vectors");
  const Vec a = P.col(0), b = P.col(1);
  if (std::abs(q_norm2(a) + 1.0) > 1e-9 || std::abs(q_norm2(b) + 1.0) > 1e-9 || std::abs(q_inner(a, b)) > 1e-9)
    throw Error(ErrorKind::bad_input, "line not timelike: plane is not q-orthonormal negative definite");
  const auto r = fiber_interval(body, a, b, Vec::Zero(a.size()));
  if (!r) throw Error(ErrorKind::invariant, "timelike geodesic misses the convex hull");
  return *r;
}

std::optional<double> facet_time(const Vec& v, const Vec& Y, double ref) {
  const int m = static_cast<int>(v.size());
  const double alpha = -v(0) / Y(0), beta = -v(1) / Y(0);
  const double gamma = Y.tail(m - 2).dot(v.tail(m - 2)) / Y(0);
  const double R = std::hypot(alpha, beta);
  if (R < 1e-15 || std::abs(gamma) > R) return std::nullopt;
  const double phi = std::atan2(beta, alpha), a = std::acos(-gamma / R);
  double best = 0.0, bd = 1e300;
  for (double t : {phi + a, phi - a}) {
    const double tt = ref + wrap_angle(t - ref);
    if (std::abs(tt - ref) < bd) { bd = std::abs(tt - ref); best = tt; }
  }
  return best;
}

BoundaryGraphs boundary_graphs(const ConvexBody& body, const RegularDomain& rd) {
  if (body.degenerate()) throw Error(ErrorKind::invariant, "degenerate body: flat hull (Fuchsian verdict)");
  BoundaryGraphs g;
  g.grid = rd.grid;
  const std::size_t N = g.grid.size();
  g.F_minus.resize(N);
  g.F_plus.resize(N);
  g.support_minus.resize(N);
  g.support_plus.resize(N);
  std::vector<char> ok(N, 1);
  parallel_for(N, [&](std::size_t i) {
    const auto iv = conformal_fiber(body, g.grid[i]);
    if (!iv) { ok[i] = 0; return; }
    g.F_minus[i] = iv->lo;
    g.F_plus[i] = iv->hi;
    g.support_minus[i] = iv->lo_facet;
    g.support_plus[i] = iv->hi_facet;
  });
  for (std::size_t i = 0; i < N; ++i)
    if (!ok[i]) throw Error(ErrorKind::invariant, "empty fiber: timelike line misses the hull");
  g.min_gap = g.min_margin_minus = g.min_margin_plus = 1e300;
  for (std::size_t i = 0; i < N; ++i) {
    g.min_gap = std::min(g.min_gap, g.F_plus[i] - g.F_minus[i]);
    g.min_margin_minus = std::min(g.min_margin_minus, g.F_minus[i] - rd.f_minus[i]);
    g.min_margin_plus = std::min(g.min_margin_plus, rd.f_plus[i] - g.F_plus[i]);
  }
  double lip = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const double d = sphere_distance(g.grid[i], g.grid[j]);
      if (d < 1e-12) continue;
      lip = std::max(lip, std::abs(g.F_plus[i] - g.F_plus[j]) / d);
      lip = std::max(lip, std::abs(g.F_minus[i] - g.F_minus[j]) / d);
    }
  g.lipschitz = lip;
  return g;
}

Vec wall_toward(const Vec& x, const Vec& l, double s) {
  const double xl = q_inner(x, l);
  if (!(xl < 0.0)) throw Error(ErrorKind::bad_input, "ideal point must pair negatively with x");
  const Vec u = l / (-xl) - x;
  return std::sinh(s) * x + std::cosh(s) * u;
}

bool ConvexCap::contains(const ConvexBody& body, const Vec& y, bool plus_side, double tol) const {
  if (!body.contains(y, tol)) return false;
  const double s = q_inner(y, v) / y.norm();
  return plus_side ? s >= -tol : s <= tol;
}

ConvexCap convex_cap(const ConvexBody& body, const Vec& v) {
  if (!(q_norm2(v) > 0.0)) throw Error(ErrorKind::bad_input, "wall covector must have q(v) > 0");
  ConvexCap cap;
  cap.v = v;
  const double tol = 1e-12 * v.norm();
  std::vector<double> s(body.lifts.size());
  for (std::size_t i = 0; i < body.lifts.size(); ++i) {
    s[i] = q_inner(body.lifts[i], v);
    if (s[i] >= -tol) cap.plus.push_back(static_cast<int>(i));
    if (s[i] <= tol) cap.minus.push_back(static_cast<int>(i));
  }
  if (cap.plus.empty() || cap.minus.empty()) throw Error(ErrorKind::bad_input, "wall misses the body");
  std::set<std::pair<int, int>> edges;
  for (const auto& f : body.faces)
    if (f.size() == 2) edges.emplace(f[0], f[1]);
  if (body.degenerate() || body.hull.affine_dim < 2) {
    for (std::size_t i = 0; i < body.hull.vertices.size(); ++i)
      for (std::size_t j = i + 1; j < body.hull.vertices.size(); ++j)
        edges.emplace(body.hull.vertices[i], body.hull.vertices[j]);
  }
  for (const auto& [a, b] : edges) {
    if ((s[a] > tol && s[b] < -tol) || (s[a] < -tol && s[b] > tol)) {
      const Vec p = s[a] * body.lifts[b] - s[b] * body.lifts[a];
      cap.wall.push_back((s[a] > 0 ? 1.0 : -1.0) * p.normalized());
    }
  }
  auto diam = [&](const std::vector<int>& idx) {
    std::vector<Vec> pts;
    for (int i : idx) pts.push_back(body.lifts[i].normalized());
    for (const auto& p : cap.wall) pts.push_back(p);
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, sphere_distance(pts[i], pts[j]));
    return d;
  };
  cap.diameter_plus = diam(cap.plus);
  cap.diameter_minus = diam(cap.minus);
  return cap;
}

std::optional<double> time_separation(const ConvexBody& body, const Vec& x) {
  if (!body.in_chart(x)) return std::nullopt;
  if (body.contains(x, 1e-9)) return 0.0;
  const Mat J = gram(body.n);
  // future or past of the body along the fiber through x
  const Conformal cx = to_conformal(AdSPoint{x});
  if (!(cx.Y(0) > 0.0)) return std::nullopt;
  const auto iv = conformal_fiber(body, cx.Y);
  if (!iv) return std::nullopt;
  const double mid = 0.5 * (iv->lo + iv->hi);
  const double th = mid + wrap_angle(cx.theta - mid);
  const int side = th > iv->hi ? 1 : (th < iv->lo ? -1 : 0);
  if (side == 0) return 0.0;
  std::vector<char> facing(body.facet_v.size());
  for (std::size_t f = 0; f < facing.size(); ++f)
    facing[f] = q_inner(x, body.facet_v[f]) > 0.0 && (body.facet_side[f] == 0 || body.facet_side[f] == side);
  std::optional<double> best;
  auto consider = [&](double mq) {
    // mq = -q(foot) = cos^2 tau
    if (!(mq > 0.0)) return;
    const double c = std::sqrt(mq);
    if (c > 1.0 + 1e-12) return;
    const double tau = std::acos(std::min(1.0, c));
    if (!best || tau > *best) best = tau;
  };
  Mat G;
  Vec rhs;
  std::vector<int> f;
  for (std::size_t fi = 0; fi < facing.size(); ++fi) {
    if (!facing[fi]) continue;
    const auto& verts = body.hull.facets[fi].verts;
    const int m = static_cast<int>(verts.size());
    for (int mask = 1; mask < (1 << m); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) < 2) continue;
      f.clear();
      for (int i = 0; i < m; ++i)
        if (mask & (1 << i)) f.push_back(verts[i]);
      const int k = static_cast<int>(f.size());
      G.resize(k, k);
      rhs.resize(k);
      for (int i = 0; i < k; ++i) {
        rhs(i) = q_inner(body.lifts[f[i]], x);
        for (int j = 0; j <= i; ++j) G(i, j) = G(j, i) = q_inner(body.lifts[f[i]], body.lifts[f[j]]);
      }
      const Eigen::FullPivLU<Mat> lu(G);
      if (!lu.isInvertible()) continue;
      const Vec c = lu.solve(rhs);
      if (c.minCoeff() < -1e-12 * c.cwiseAbs().maxCoeff()) continue;
      consider(-c.dot(rhs));
    }
  }
  if (body.degenerate() && body.cell_basis.cols() > 0) {
    const Mat& Bm = body.cell_basis;
    const Mat G = Bm.transpose() * J * Bm;
    const Eigen::FullPivLU<Mat> lu(G);
    if (lu.isInvertible()) {
      const Vec rhs = Bm.transpose() * J * x;
      const Vec c = lu.solve(rhs);
      const Vec foot = Bm * c;
      const double mq = -q_norm2(foot);
      if (mq > 0.0) {
        Vec y = foot / std::sqrt(mq);
        if (q_inner(y, x) > 0.0) y = -y;
        if (body.contains(y, 1e-9)) consider(mq);
      }
    }
  }
  return best;
}

bool eps_membership(const ConvexBody& body, double eps, const Vec& x) {
  const auto t = time_separation(body, x);
  return t && *t <= eps;
}

Vec body_basepoint(const ConvexBody& body) {
  Vec b = Vec::Zero(body.n + 2);
  for (const auto& l : body.lifts) b += l;
  const double q = q_norm2(b);
  if (!(q < 0.0)) throw Error(ErrorKind::invariant, "barycenter is not timelike");
  return b / std::sqrt(-q);
}

AgreementReport hull_regular_agreement(const ConvexBody& body, const RegularDomain& rd, std::size_t samples,
                                       unsigned long long seed, double band) {
  AgreementReport r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int n = body.n;
  const auto dirs = sphere_grid(n - 1, 720);
  while (r.tested + r.band_skipped < samples) {
    const double phi = 0.5 * std::numbers::pi * 0.97 * std::sqrt(U(rng));
    const Vec& d = dirs[static_cast<std::size_t>(U(rng) * dirs.size()) % dirs.size()];
    Vec Y(n + 1);
    Y(0) = std::cos(phi);
    Y.tail(n) = std::sin(phi) * d;
    const double fm = rd.eval_minus(Y), fp = rd.eval_plus(Y);
    const double th = fm - 0.4 + (fp - fm + 0.8) * U(rng);
    const Conformal c{th, Y};
    const Vec x = ads_from_conformal(c).lift;
    const auto iv = conformal_fiber(body, Y);
    double near = std::min(std::abs(th - fm), std::abs(th - fp));
    if (iv) near = std::min({near, std::abs(th - iv->lo), std::abs(th - iv->hi)});
    if (near < band) {
      ++r.band_skipped;
      continue;
    }
    ++r.tested;
    const bool in_hull = iv && th >= iv->lo && th <= iv->hi;
    const bool in_e = fm < th && th < fp;
    if (in_hull) ++r.inside;
    if (in_hull != in_e) ++r.disagreements;
    (void)x;
  }
  return r;
}

}  // namespace ads

#include "adsanosov/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ads {

namespace {

double polytope_exit(const ConvexBody& b, const Vec& x, const Vec& d) {
  double s = kUnboundedChord;
  bool hit = false;
  for (const auto& f : b.hull.facets) {
    const double nd = f.normal.dot(d);
    if (nd <= 1e-300) continue;
    const double t = (f.offset - f.normal.dot(x)) / nd;
    if (t < s) {
      s = t;
      hit = true;
    }
  }
  if (!hit) throw Error(ErrorKind::invariant, "chord fails to exit body");
  return std::max(s, 0.0);
}

bool eps_member_chart(const ConvexBody& b, double eps, const Vec& c) {
  const Vec z = b.from_chart(c);
  const double q = q_norm2(z);
  if (!(q < 0.0)) return false;
  return eps_membership(b, eps, z / std::sqrt(-q));
}

}  // namespace

HilbertContext ball_context(int dim) {
  HilbertContext c;
  c.kind = "ball";
  c.dim = dim;
  c.exit = [](const Vec& x, const Vec& d) {
    const double a = d.squaredNorm(), bb = x.dot(d), cc = x.squaredNorm() - 1.0;
    if (a == 0.0) throw Error(ErrorKind::bad_input, "zero chord direction");
    // citardauq form keeps the positive root accurate
    const double disc = std::sqrt(std::max(0.0, bb * bb - a * cc));
    return bb > 0.0 ? -cc / (bb + disc) : (disc - bb) / a;
  };
  return c;
}

HilbertContext hull_context(const ConvexBody& body) {
  HilbertContext c;
  c.kind = "hull";
  c.dim = body.hull.dim;
  c.body = &body;
  c.exit = [&body](const Vec& x, const Vec& d) { return polytope_exit(body, x, d); };
  return c;
}

HilbertContext eps_context(const ConvexBody& body, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorKind::bad_input, "eps must lie in (0, 0.5]");
  HilbertContext c;
  c.kind = "hull-eps";
  c.dim = body.hull.dim;
  c.eps = eps;
  c.body = &body;
  c.exit = [&body, eps](const Vec& x, const Vec& d) {
    const double s0 = polytope_exit(body, x, d);
    double lo = s0, step = std::max(1e-3, 0.05 * s0), hi = s0 + step;
    while (eps_member_chart(body, eps, x + hi * d)) {
      lo = hi;
      step *= 2.0;
      hi = s0 + step;
      if (hi > kUnboundedChord) throw Error(ErrorKind::invariant, "chord fails to exit body");
    }
    while (hi - lo > kChordTol * std::max(1.0, hi)) {
      const double m = 0.5 * (lo + hi);
      (eps_member_chart(body, eps, x + m * d) ? lo : hi) = m;
    }
    return lo;
  };
  return c;
}

Chord chord(const HilbertContext& ctx, const Vec& x, const Vec& y) {
  const Vec d = y - x;
  return Chord{-ctx.exit(x, -d), ctx.exit(x, d)};
}

double hilbert_distance(const HilbertContext& ctx, const Vec& x, const Vec& y) {
  if ((x - y).norm() == 0.0) return 0.0;
  // fixed argument order makes d exactly symmetric
  if (std::lexicographical_compare(y.data(), y.data() + y.size(), x.data(), x.data() + x.size()))
    return hilbert_distance(ctx, y, x);
  const Chord c = chord(ctx, x, y);
  const double a = -c.t_minus, b = c.t_plus;
  if (!(a > 0.0) || !(b > 1.0)) throw Error(ErrorKind::bad_input, "points not interior to the body");
  // cross-ratio with boundary points at -a and b on the line x = 0, y = 1
  return 0.5 * std::abs(std::log(((1.0 + a) * b) / (a * (b - 1.0))));
}

double hilbert_distance_lifted(const HilbertContext& ctx, const Vec& X, const Vec& Y) {
  if (!ctx.body) throw Error(ErrorKind::bad_input, "context has no chart");
  return hilbert_distance(ctx, ctx.body->to_chart(X), ctx.body->to_chart(Y));
}

double ads_spacelike_length(const Vec& x, const Vec& y) {
  const double c = -q_inner(x, y);
  if (c < 1.0 - 1e-12) throw Error(ErrorKind::bad_input, "pair not spacelike separated");
  return std::acosh(std::max(1.0, c));
}

double klein_distance(const Vec& x, const Vec& y) {
  const double ix = 1.0 - x.squaredNorm(), iy = 1.0 - y.squaredNorm();
  if (!(ix > 0.0 && iy > 0.0)) throw Error(ErrorKind::bad_input, "point outside the unit ball");
  const double c = (1.0 - x.dot(y)) / std::sqrt(ix * iy);
  return std::acosh(std::max(1.0, c));
}

CalibrationReport klein_calibration(std::size_t pairs, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto in_ball = [&](int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = N(rng);
    return Vec(v.normalized() * 0.95 * std::pow(U(rng), 1.0 / dim));
  };
  CalibrationReport r;
  for (int dim : {2, 3}) {
    const auto ctx = ball_context(dim);
    for (std::size_t k = 0; k < pairs; ++k) {
      const Vec a = in_ball(dim), b = in_ball(dim);
      r.max_error = std::max(r.max_error, std::abs(hilbert_distance(ctx, a, b) - klein_distance(a, b)));
      ++r.pairs;
    }
  }
  return r;
}

ChordReport limit_chord_check(const ConvexBody& body, std::size_t pairs, unsigned long long seed) {
  if (body.degenerate()) throw Error(ErrorKind::bad_input, "chord check needs a full-dimensional hull");
  const auto ctx = hull_context(body);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, body.hull.vertices.size() - 1);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  ChordReport r;
  while (r.tested < pairs) {
    if (r.rejected > 1000 * (pairs + 1)) throw Error(ErrorKind::invariant, "no interior chords between sample points");
    const Vec& p = body.lifts[body.hull.vertices[pick(rng)]];
    const Vec& q = body.lifts[body.hull.vertices[pick(rng)]];
    const double pq = q_inner(p, q);
    const Vec mid = body.to_chart(p + q);
    double slack = 1e300;
    for (const auto& f : body.hull.facets) slack = std::min(slack, f.offset - f.normal.dot(mid));
    if (!(pq < -1e-3) || slack < 1e-6) {
      ++r.rejected;
      continue;
    }
    const double t1 = U(rng), t2 = U(rng), s = std::sqrt(-2.0 * pq);
    const Vec x = (std::exp(t1) * p + std::exp(-t1) * q) / s;
    const Vec y = (std::exp(t2) * p + std::exp(-t2) * q) / s;
    r.max_error = std::max(r.max_error, std::abs(hilbert_distance_lifted(ctx, x, y) - ads_spacelike_length(x, y)));
    ++r.tested;
  }
  return r;
}

}  // namespace ads

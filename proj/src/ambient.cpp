#include "adsanosov/ambient.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ads {

namespace {
void check_same(const Vec& u, const Vec& v) {
  if (u.size() != v.size() || u.size() < 4)
    throw Error(ErrorKind::bad_input, "dimension mismatch in q_inner");
}
}  // namespace

Mat gram(int n) {
  Mat J = Mat::Identity(n + 2, n + 2);
  J(0, 0) = J(1, 1) = -1.0;
  return J;
}

Vec lower(const Vec& u) {
  Vec r = u;
  r(0) = -r(0);
  r(1) = -r(1);
  return r;
}

double q_inner(const Vec& u, const Vec& v) {
  check_same(u, v);
  return -u(0) * v(0) - u(1) * v(1) + u.tail(u.size() - 2).dot(v.tail(v.size() - 2));
}

Vec paired_to_standard(const Vec& p) {
  const auto m = p.size();
  Vec u(m);
  const double a1 = p(0), a2 = p(1), b1 = p(2), b2 = p(3);
  u(0) = 0.5 * (a1 + b1);
  u(1) = 0.5 * (a2 + b2);
  for (Eigen::Index i = 4; i < m; ++i) u(i - 2) = p(i);
  u(m - 2) = 0.5 * (a1 - b1);
  u(m - 1) = 0.5 * (a2 - b2);
  return u;
}

Vec standard_to_paired(const Vec& u) {
  const auto m = u.size();
  Vec p(m);
  p(0) = u(0) + u(m - 2);
  p(1) = u(1) + u(m - 1);
  p(2) = u(0) - u(m - 2);
  p(3) = u(1) - u(m - 1);
  for (Eigen::Index i = 4; i < m; ++i) p(i) = u(i - 2);
  return p;
}

double q_paired(const Vec& p) {
  return -p(0) * p(2) - p(1) * p(3) + p.tail(p.size() - 4).squaredNorm();
}

EinPoint EinPoint::from_null(const Vec& v) {
  const double nv = v.norm();
  if (!(nv > 0.0)) throw Error(ErrorKind::bad_input, "zero vector is not a point of Ein");
  Vec l = v / nv;
  if (std::abs(q_norm2(l)) > 1e-8) throw Error(ErrorKind::bad_input, "vector is not isotropic");
  return EinPoint{std::move(l)};
}

AdSPoint AdSPoint::from_timelike(const Vec& v) {
  const double q = q_norm2(v);
  if (!(q < 0.0)) throw Error(ErrorKind::bad_input, "vector is not timelike");
  return AdSPoint{v / std::sqrt(-q)};
}

const char* to_string(Causal c) {
  switch (c) {
    case Causal::timelike: return "timelike";
    case Causal::lightlike: return "lightlike";
    case Causal::unrelated: return "unrelated";
  }
  return "?";
}

Conformal to_conformal(const AdSPoint& p) {
  const Vec& u = p.lift;
  const double r = std::hypot(u(0), u(1));
  Conformal c;
  c.theta = std::atan2(u(1), u(0));
  c.Y.resize(u.size() - 1);
  c.Y(0) = 1.0;
  c.Y.tail(u.size() - 2) = u.tail(u.size() - 2);
  c.Y /= r;
  c.Y.normalize();
  return c;
}

Conformal to_conformal(const EinPoint& p) {
  const Vec& u = p.lift;
  const Vec x = u.tail(u.size() - 2);
  const double nx = x.norm();
  if (!(nx > 1e-300)) throw Error(ErrorKind::bad_input, "zero spatial part on boundary point");
  Conformal c;
  c.theta = std::atan2(u(1), u(0));
  c.Y = Vec::Zero(u.size() - 1);
  c.Y.tail(u.size() - 2) = x / nx;
  return c;
}

AdSPoint ads_from_conformal(const Conformal& c) {
  if (!(c.Y(0) > 0.0)) throw Error(ErrorKind::bad_input, "interior point needs Y_1 > 0");
  const auto m = c.Y.size() + 1;
  Vec u(m);
  const double r = 1.0 / c.Y(0);
  u(0) = r * std::cos(c.theta);
  u(1) = r * std::sin(c.theta);
  u.tail(m - 2) = c.Y.tail(m - 2) / c.Y(0);
  return AdSPoint{u};
}

EinPoint ein_from_conformal(const Conformal& c) {
  const auto m = c.Y.size() + 1;
  Vec u(m);
  u(0) = std::cos(c.theta);
  u(1) = std::sin(c.theta);
  const Vec x = c.Y.tail(m - 2);
  u.tail(m - 2) = x / x.norm();
  return EinPoint{u / std::sqrt(2.0)};
}

double sphere_distance(const Vec& a, const Vec& b) {
  const double chord = (a - b).norm();
  return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

double wrap_angle(double a) {
  constexpr double tau = 2.0 * std::numbers::pi;
  a = std::fmod(a, tau);
  if (a <= -std::numbers::pi) a += tau;
  if (a > std::numbers::pi) a -= tau;
  return a;
}

Causal causal_relation(const Conformal& p, const Conformal& q, double tol) {
  const double dt = std::abs(p.theta - q.theta);
  const double d = sphere_distance(p.Y, q.Y);
  if (std::abs(dt - d) <= tol) return Causal::lightlike;
  return dt > d ? Causal::timelike : Causal::unrelated;
}

std::vector<EinPoint> sign_fix_lifts(std::span<const Vec> points, double tol) {
  if (points.empty()) throw Error(ErrorKind::bad_input, "empty point list");
  const std::size_t N = points.size();
  std::vector<Vec> lifts;
  lifts.reserve(N);
  for (const auto& p : points) lifts.push_back(p / p.norm());

  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if ((lifts[i] + lifts[j]).norm() < 1e-9)
        throw Error(ErrorKind::invariant, "not achronal as lifted: antipodal pair in sample");

  // Prim-style propagation along the strongest pairings.
  std::vector<char> fixed(N, 0);
  std::vector<double> best(N, -1.0);
  std::vector<std::size_t> from(N, 0);
  for (std::size_t done = 0; done < N; ++done) {
    std::size_t pick = N;
    double w = -1.0;
    for (std::size_t j = 0; j < N; ++j)
      if (!fixed[j] && best[j] > w) { w = best[j]; pick = j; }
    if (pick == N || w <= tol) {
      // new component: first unfixed point keeps its sign
      for (std::size_t j = 0; j < N; ++j)
        if (!fixed[j]) { pick = j; break; }
    } else if (q_inner(lifts[from[pick]], lifts[pick]) > 0.0) {
      lifts[pick] = -lifts[pick];
    }
    fixed[pick] = 1;
    for (std::size_t j = 0; j < N; ++j) {
      if (fixed[j]) continue;
      const double a = std::abs(q_inner(lifts[pick], lifts[j]));
      if (a > best[j]) { best[j] = a; from[j] = pick; }
    }
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if (q_inner(lifts[i], lifts[j]) > tol)
        throw Error(ErrorKind::invariant, "not achronal as lifted");

  std::vector<EinPoint> out;
  out.reserve(N);
  for (auto& l : lifts) out.push_back(EinPoint{std::move(l)});
  return out;
}

}  // namespace ads

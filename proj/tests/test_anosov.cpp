#include "doctest.h"

#include "adsanosov/anosov.hpp"
#include "adsanosov/gallery.hpp"
#include "adsanosov/lie.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ads;

namespace {

const Representation& fuchsian() {
  static const auto r = fuchsian_genus2();
  return r;
}
const Representation& small() {
  static const auto r = small_deformation();
  return r;
}
const Representation& deformed() {
  static const auto r = product_deformed();
  return r;
}
const ConvexBody& deformed_body() {
  static const auto b = convex_hull(limit_set_sample(deformed(), 3));
  return b;
}

double sign_free(const Vec& a, const Vec& b) {
  return std::min((a.normalized() - b.normalized()).norm(), (a.normalized() + b.normalized()).norm());
}

FlowPoint some_point(double r, double a, double b) {
  Vec base(3), t(3);
  base << std::cosh(r), std::sinh(r) * std::cos(a), std::sinh(r) * std::sin(a);
  t << 0.0, std::cos(b), std::sin(b);
  return make_flow_point(base, t);
}

Vec embed_base(const Vec& y) {
  Vec x(4);
  x << y(0), 0.0, y(1), y(2);
  return x;
}

}  // namespace

TEST_CASE("flow step") {
  const auto p = some_point(0.7, 0.3, 2.0);
  CHECK(std::abs(minkowski(p.base, p.base) + 1.0) < kFlowTol);
  CHECK(std::abs(minkowski(p.tangent, p.tangent) - 1.0) < kFlowTol);
  CHECK(std::abs(minkowski(p.base, p.tangent)) < kFlowTol);
  const auto p0 = flow_step(p, 0.0);
  CHECK((p0.base - p.base).norm() < 1e-15);
  CHECK((p0.tangent - p.tangent).norm() < 1e-15);
  for (double s : {0.3, 1.0, -2.0})
    for (double t : {0.5, 2.5, -1.0}) {
      const auto a = flow_step(flow_step(p, s), t), b = flow_step(p, s + t);
      CHECK((a.base - b.base).norm() < 1e-9 * b.base.norm());
      CHECK((a.tangent - b.tangent).norm() < 1e-9 * b.tangent.norm());
      CHECK(std::abs(hyperbolic_distance(p.base, b.base) - std::abs(s + t)) < 1e-9);
      CHECK((b.xi_plus - p.xi_plus).norm() == 0.0);
    }
  const auto q = make_flow_point(flow_step(p, 3.0).base, flow_step(p, 3.0).tangent);
  CHECK((q.xi_plus - p.xi_plus).norm() < 1e-9);
  CHECK((q.xi_minus - p.xi_minus).norm() < 1e-9);
}

TEST_CASE("endpoint maps") {
  const auto fam = default_family(2);
  SUBCASE("fuchsian equator") {
    for (int k = 0; k < 6; ++k) {
      const auto p = some_point(0.2 * k, 0.9 * k, 1.3 + k);
      const auto e = endpoint_maps(p, fuchsian(), fam.x0);
      Vec wp(4), wm(4);
      wp << 1.0, 0.0, p.xi_plus(0), p.xi_plus(1);
      wm << 1.0, 0.0, p.xi_minus(0), p.xi_minus(1);
      CHECK(sign_free(e.plus.lift, wp) < 1e-6);
      CHECK(sign_free(e.minus.lift, wm) < 1e-6);
    }
  }
  SUBCASE("product factors") {
    for (const char* w : {"a", "cD", "abC"}) {
      const auto p = axis_flow_point(deformed().evaluate_base(w));
      const auto e = endpoint_maps(p, deformed(), fam.x0);
      CHECK(sign_free(e.plus.lift, product_fixed_point(deformed(), w)) < 1e-6);
      CHECK(sign_free(e.minus.lift, product_fixed_point(deformed(), inverse_word(w))) < 1e-6);
    }
  }
  SUBCASE("flow invariance") {
    const auto p = some_point(0.5, 1.0, 0.4);
    const auto e = endpoint_maps(p, deformed(), fam.x0);
    for (double t : {1.0, 5.0, 10.0}) {
      const auto q = flow_step(p, t);
      const auto f = endpoint_maps(make_flow_point(q.base, q.tangent), deformed(), fam.x0);
      CHECK(sign_free(e.plus.lift, f.plus.lift) < 1e-6);
      CHECK(sign_free(e.minus.lift, f.minus.lift) < 1e-6);
    }
  }
}

TEST_CASE("metric norm") {
  const auto fam = default_family(2);
  const MetricAtom a0{fam.x0, fam.V0};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Vec z(4);
    const double th = N(rng);
    const double ph = N(rng);
    z << std::cos(th), std::sin(th), std::cos(ph), std::sin(ph);
    z /= std::sqrt(2.0);
    Vec w(4);
    for (int j = 0; j < 4; ++j) w(j) = N(rng);
    // tangent to the cone, Euclidean-orthogonal to z: the round-sphere tangent vector
    Vec zr = z;
    zr.tail(2) *= -1.0;
    const Mat B = tangent_basis(z, zr);
    Vec tw = B * B.transpose() * w;
    tw -= z * z.dot(tw);
    CHECK(std::abs(metric_norm(a0, z, tw) - tw.norm()) < 1e-12);
    CHECK(std::abs(metric_norm(a0, z, 2.0 * tw) - 2.0 * metric_norm(a0, z, tw)) < 1e-12);
    const Mat g = deformed().evaluate(i % 2 ? "aC" : "bA");
    const MetricAtom a1{local_atom(fam, Vec(Vec::Unit(3, 0) * std::cosh(0.3) + Vec::Unit(3, 1) * std::sinh(0.3))).x, fam.V0};
    const double lhs = metric_norm(transform(g, a1), g * z, g * tw), rhs = metric_norm(a1, z, tw);
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, rhs));
  }
  CHECK_THROWS_AS(metric_norm(a0, Vec::Zero(4), Vec::Unit(4, 2)), Error);
}

TEST_CASE("distortion constant") {
  const auto fam = default_family(2);
  CHECK(distortion_constant(fuchsian(), fam, 1e-3, 64, 3) - 1.0 < 1e-3);
  double prev = 1.0;
  for (double d = 0.01; d < 3.0; d *= 2.0) {
    const double c = distortion_constant(small(), fam, d, 32, 5);
    CHECK(c >= prev);
    CHECK(c >= 1.0);
    prev = c;
  }
  // diameter of the Fuchsian D-bar_conv from tiling_tests(R = 3, 1000 samples, seed 17)
  const double c = distortion_constant(fuchsian(), fam, 2.4517573278924214, 64, 3);
  CHECK(std::isfinite(c));
  CHECK(c == doctest::Approx(10.027060704439835).epsilon(1e-9));
}

TEST_CASE("doubling time") {
  const auto fam = default_family(2);
  for (const char* w : {"a", "bc", "CdA"}) {
    const auto p = axis_flow_point(fuchsian().evaluate_base(w));
    // ratio e^{2t}: first grid time >= ln 2 / 2
    const double t = doubling_time(p, fuchsian(), fam, 2.0, 50.0);
    CHECK(t == doctest::Approx(std::ceil(std::log(2.0) / 2.0 / kGridStep) * kGridStep));
    CHECK(doubling_time(p, fuchsian(), fam, 1.0, 50.0) == 0.0);
  }
  CHECK_THROWS_AS(doubling_time(some_point(0, 0, 0), fuchsian(), fam, 2.0, 300.0), Error);
  for (int k = 0; k < 5; ++k) {
    const auto p = some_point(0.3 * k, 1.1 * k, 0.5 + k);
    const double t = doubling_time(p, deformed(), fam, 2.0, 50.0);
    for (const char* g : {"a", "cB"}) {
      const auto q = transform(deformed().evaluate_base(g), p);
      CHECK(std::abs(doubling_time(q, deformed(), fam, 2.0, 50.0) - t) <= kGridStep + 1e-12);
    }
  }
}

TEST_CASE("alpha cocycle") {
  const auto fam = default_family(2);
  SUBCASE("closed form on axes") {
    for (const Representation* rep : {&fuchsian(), &small(), &deformed()})
      for (const char* w : {"a", "ab", "cD", "ac"}) {
        const auto p = axis_flow_point(rep->evaluate_base(w));
        const auto tab = alpha_cocycle(p, *rep, fam, 8.0);
        CHECK(tab.alpha_minus.front() == 1.0);
        CHECK(tab.alpha_plus.front() == 1.0);
        CHECK(tab.rate_minus == doctest::Approx(axis_rate(*rep, w)).epsilon(0.05));
      }
    CHECK(axis_rate(fuchsian(), "a") == doctest::Approx(-2.0));
  }
  SUBCASE("submultiplicative") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> k(1, 12);
    int done = 0;
    for (const Representation* rep : {&fuchsian(), &deformed()})
      for (int i = 0; i < 50; ++i) {
        const auto p = flow_samples(2, 1, 1.4, 100 + i)[0];
        const auto e = endpoint_maps(p, *rep, fam.x0);
        const double s = k(rng) * kGridStep, t = k(rng) * kGridStep;
        const auto A = alpha_cocycle(p, *rep, fam, s + t, &e);
        const auto B = alpha_cocycle(flow_step(p, s), *rep, fam, t, &e);
        const double lhs = A.alpha_minus.back();
        const double rhs = A.alpha_minus[static_cast<std::size_t>(std::lround(s / kGridStep))] * B.alpha_minus.back();
        CHECK(lhs <= rhs * (1.0 + 1e-9));
        ++done;
      }
    CHECK(done == 100);
  }
  SUBCASE("time-reversal duality") {
    for (int i = 0; i < 10; ++i) {
      const auto p = flow_samples(2, 1, 1.4, 300 + i)[0];
      const auto e = endpoint_maps(p, deformed(), fam.x0);
      const double t = 2.0;
      const auto A = alpha_cocycle(p, deformed(), fam, t, &e);
      const auto q = flow_step(p, t);
      const auto r = make_flow_point(q.base, -q.tangent);
      const Endpoints er{e.minus, e.plus, e.residual};
      const auto B = alpha_cocycle(r, deformed(), fam, t, &er);
      CHECK(A.alpha_plus.back() * B.alpha_minus.back() == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("recurrence caps and expansion") {
  const auto& b = deformed_body();
  const auto p = axis_flow_point(deformed().evaluate_base("ab"));
  const auto r = recurrence_caps(p, deformed(), b, 12, "ab");
  REQUIRE(r.words.size() == 6);
  CHECK(r.words[2] == "ababab");
  CHECK(r.expansion_increasing);
  CHECK(r.inverse_expansion.back() > 1e3);
  CHECK(r.plus_in_caps);
  CHECK(r.minus_in_dminus);
  CHECK(r.nested);
  for (std::size_t i = 1; i < r.diameters.size(); ++i) CHECK(r.diameters[i] <= r.diameters[i - 1]);
  CHECK(r.diameter_rate < 0.0);
  const auto w = recurrence_caps(some_point(0.2, 0.4, 1.0), deformed(), b, 12);
  CHECK(w.words.size() >= 3);
  CHECK(w.plus_in_caps);
  CHECK(w.inverse_expansion.back() > 1e3);
}

TEST_CASE("conjugacy map") {
  const auto fam = default_family(2);
  SUBCASE("fuchsian geodesic") {
    for (int k = 0; k < 5; ++k) {
      const auto p = some_point(0.3 * k, 0.7 * k, 2.0 + k);
      const auto c = conjugacy_map(p, fuchsian(), fam.x0, fam.x0);
      CHECK((c.point - embed_base(p.base)).norm() < 1e-6);
    }
  }
  const auto& b = deformed_body();
  const Vec xb = body_basepoint(b);
  const auto p = some_point(0.4, 0.2, 1.7);
  const auto c = conjugacy_map(p, deformed(), xb, fam.x0);
  CHECK(std::abs(q_norm2(c.point) + 1.0) < 1e-9);
  Mat P(4, 2);
  P << c.lplus, c.lminus;
  for (double t : {0.5, 2.0, 5.0}) {
    const auto ct = conjugacy_map(flow_step(p, t), deformed(), xb, fam.x0);
    const Vec res = ct.point - P * P.colPivHouseholderQr().solve(ct.point);
    CHECK(res.norm() < 1e-8);
    CHECK(std::acosh(-q_inner(ct.point, c.point)) == doctest::Approx(t).epsilon(1e-6));
  }
  for (const char* w : {"a", "Bc", "dA", "abC", "cDb"}) {
    const Mat g = deformed().evaluate(w), h = deformed().evaluate_base(w);
    const Vec o = h * Vec::Unit(3, 0);
    const auto cg = conjugacy_map(transform(h, p), deformed(), g * xb, fam.x0, &o);
    CHECK((cg.point - g * c.point).norm() < 1e-8 * (g * c.point).norm());
  }
}

TEST_CASE("certificate") {
  for (const Representation* rep : {&fuchsian(), &small()}) {
    CertifyConfig cfg;
    cfg.seed = 7;
    const auto c = certify(*rep, cfg);
    CHECK(c.pass);
    CHECK(c.samples.size() == 200);
    for (const auto& s : c.samples) {
      CHECK(s.doubling_t <= 2.0);
      CHECK(s.rate < 0.0);
      CHECK(s.r2 > 0.9);
      CHECK(s.chained_ok);
    }
    CHECK(c.C_delta >= 1.0);
  }
  try {
    certify(torus_universe(), CertifyConfig{});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::certification);
    CHECK(std::string(e.what()).find("acausality precondition failed") != std::string::npos);
  }
}

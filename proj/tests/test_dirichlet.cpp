#include "doctest.h"

#include "adsanosov/dirichlet.hpp"
#include "adsanosov/gallery.hpp"
#include "adsanosov/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace ads;

namespace {

const Representation& fuchsian() {
  static const auto r = fuchsian_genus2();
  return r;
}
const ConvexBody& fuchsian_body() {
  static const auto b = convex_hull(limit_set_sample(fuchsian(), 3));
  return b;
}
const Representation& deformed() {
  static const auto r = product_deformed();
  return r;
}
const ConvexBody& deformed_body() {
  static const auto b = convex_hull(limit_set_sample(deformed(), 3));
  return b;
}
Vec e0() {
  Vec v = Vec::Zero(4);
  v(0) = 1.0;
  return v;
}
const DirichletApprox& fuchsian_D() {
  static const auto d = dirichlet_build(fuchsian(), fuchsian_body(), e0(), 3);
  return d;
}
const DirichletApprox& deformed_D() {
  static const auto d = dirichlet_build(deformed(), deformed_body(), body_basepoint(deformed_body()), 3);
  return d;
}

bool same(const Mat& a, const Mat& b, double tol = 1e-8) {
  return (a - b).cwiseAbs().maxCoeff() <= tol * std::max(1.0, b.cwiseAbs().maxCoeff());
}

double sign_free(const Vec& a, const Vec& b) {
  return std::min((a.normalized() - b.normalized()).norm(), (a.normalized() + b.normalized()).norm());
}

}  // namespace

TEST_CASE("fuchsian domain is the regular octagon") {
  for (int R : {1, 3}) {
    const auto D = dirichlet_build(fuchsian(), fuchsian_body(), e0(), R);
    REQUIRE(D.entries.size() == 8);
    std::vector<double> ang;
    const double ch = std::cosh(2.0 * octagon_inradius());
    for (const auto& e : D.entries) {
      CHECK(!e.word.empty());
      CHECK(e.word.size() == 1);
      // u = (cosh 2r - 1, 0, sinh 2r cos phi, sinh 2r sin phi)
      CHECK(std::abs(e.u(0) - (ch - 1.0)) < 1e-9);
      CHECK(std::abs(e.u(1)) < 1e-12);
      CHECK(std::abs(std::hypot(e.u(2), e.u(3)) - std::sqrt(ch * ch - 1.0)) < 1e-9);
      ang.push_back(std::atan2(e.u(3), e.u(2)));
    }
    std::sort(ang.begin(), ang.end());
    for (std::size_t i = 0; i + 1 < ang.size(); ++i) CHECK(std::abs(ang[i + 1] - ang[i] - std::numbers::pi / 4) < 1e-6);
    if (R == 3) CHECK(D.candidates > 100);
  }
}

TEST_CASE("basepoint checks") {
  CHECK_THROWS_AS(dirichlet_build(fuchsian(), fuchsian_body(), 2.0 * e0(), 1), Error);
  Vec far = Vec::Zero(4);
  far(0) = std::cos(0.3);
  far(1) = std::sin(0.3);
  CHECK_THROWS_AS(dirichlet_build(fuchsian(), fuchsian_body(), far, 1), Error);
}

TEST_CASE("pruning agrees with the full half-space list on the hull") {
  const auto& b = deformed_body();
  const Vec x0 = body_basepoint(b);
  const auto full = dirichlet_build(deformed(), b, x0, 3, false);
  const auto& D = deformed_D();
  CHECK(D.entries.size() < full.entries.size());
  std::size_t checked = 0;
  for (const auto& x : hull_samples(b, 1000, 5)) {
    const double ef = full.excess(x), ep = D.excess(x);
    if (std::abs(ef) < 1e-6 || std::abs(ep) < 1e-6) continue;
    ++checked;
    CHECK((ef <= 0) == (ep <= 0));
  }
  CHECK(checked > 900);
}

TEST_CASE("translated basepoint gives the translated domain") {
  const auto& b = deformed_body();
  const Vec x0 = body_basepoint(b);
  const Mat h = deformed().evaluate("a");
  const Vec x1 = h * x0;
  REQUIRE(b.contains(x1, 1e-9));
  const auto D0 = dirichlet_build(deformed(), b, x0, 2, false);
  const auto D1 = dirichlet_build(deformed(), b, x1, 4, false);
  std::size_t checked = 0;
  for (const auto& y : hull_samples(b, 1000, 9)) {
    const double e1 = D1.excess(y), e0v = D0.excess(group_inverse(h) * y);
    if (std::abs(e1) < 1e-6 || std::abs(e0v) < 1e-6) continue;
    // only points near the center, where radius 2 already decides membership
    if (e0v > 0.0 && e1 <= 0.0) continue;
    ++checked;
    CHECK((e1 <= 0) == (e0v <= 0));
  }
  CHECK(checked > 100);
}

TEST_CASE("locate trivial cases") {
  const auto& D = fuchsian_D();
  const auto l0 = locate_domain(e0(), D);
  CHECK(l0.word.empty());
  CHECK(l0.steps == 0);
  for (const char* w : {"a", "B", "cd", "abA"}) {
    const Mat g = fuchsian().evaluate(w);
    const auto l = locate_domain(g * e0(), D);
    CHECK(same(l.m, g, 1e-7));
    CHECK(l.word == reduce_word(w));
  }
}

TEST_CASE("hill climb reaches the ball maximum") {
  const auto& b = deformed_body();
  const auto& D = deformed_D();
  const auto ball = word_ball(deformed(), 4);
  std::vector<Vec> imgs;
  for (const auto& we : ball) imgs.push_back(we.m * D.x0);
  std::mt19937_64 rng(3);
  const auto xs = hull_samples(b, 1000, 11);
  std::size_t worse = 0;
  for (const auto& x : xs) {
    double best = -1e300;
    for (const auto& v : imgs) best = std::max(best, q_inner(x, v));
    const auto l = locate_domain(x, D);
    if (l.xi < best - 1e-9 * std::abs(best)) ++worse;
  }
  CHECK(worse == 0);
}

TEST_CASE("tiling") {
  for (int which = 0; which < 2; ++which) {
    const auto& D = which ? deformed_D() : fuchsian_D();
    const auto& b = which ? deformed_body() : fuchsian_body();
    const auto r = tiling_tests(D, b, 1000, 17);
    CHECK(r.uncovered == 0);
    CHECK(r.interior_overlaps == 0);
    CHECK(r.pass());
    CHECK(r.max_local >= 1);
    CHECK(r.diameter > 0.0);
  }
}

TEST_CASE("trivial group has one tile") {
  Representation rep = fuchsian();
  for (auto& g : rep.gens) g = Mat::Identity(4, 4);
  const auto D = dirichlet_build(rep, fuchsian_body(), e0(), 2);
  CHECK(D.entries.empty());
  CHECK(D.moves.empty());
  const auto r = tiling_tests(D, fuchsian_body(), 200, 1);
  CHECK(r.covered == 200);
  CHECK(r.max_local == 1);
}

TEST_CASE("generating set") {
  for (int which = 0; which < 2; ++which) {
    const auto& rep = which ? deformed() : fuchsian();
    const auto S = generating_set(which ? deformed_D() : fuchsian_D());
    auto has = [&](const Mat& m) { return std::any_of(S.begin(), S.end(), [&](const auto& g) { return same(g.m, m); }); };
    for (const auto& m : S) CHECK(has(group_inverse(m.m)));
    for (char c : std::string("aAbBcCdD")) {
      const Mat g = rep.letter(c);
      bool ok = has(g);
      for (std::size_t i = 0; !ok && i < S.size(); ++i)
        for (std::size_t j = 0; !ok && j < S.size(); ++j) ok = same(S[i].m * S[j].m, g, 1e-7);
      CHECK(ok);
    }
    if (!which) CHECK(S.size() == 8);
  }
}

TEST_CASE("orbit map quasi-isometry fit") {
  const auto& D = deformed_D();
  const auto S = generating_set(D);
  const auto f2 = qi_fit(D, deformed_body(), S, 2);
  const auto f3 = qi_fit(D, deformed_body(), S, 3, 5);
  CHECK(f2.pairs > 50);
  CHECK(f2.a <= 10.0);
  CHECK(f3.a <= 10.0);
  CHECK(std::abs(f3.a - f2.a) <= 0.2 * f2.a);
  CHECK(f2.b >= 0.0);
}

TEST_CASE("boundary map") {
  SUBCASE("fuchsian lands on the equator") {
    for (int k = 0; k < 8; ++k) {
      const double a = 0.37 + k * 0.8;
      Vec xi(2);
      xi << std::cos(a), std::sin(a);
      const auto bi = boundary_map(fuchsian(), xi, 36, e0());
      Vec want(4);
      want << 1.0, 0.0, xi(0), xi(1);
      CHECK(sign_free(bi.point.lift, want) < 1e-4);
      CHECK(bi.residual < 1e-4);
    }
  }
  SUBCASE("product poles") {
    const auto& rep = deformed();
    const Vec x0 = body_basepoint(deformed_body());
    for (const char* w : {"a", "b", "cD", "abC", "dAc"}) {
      const Mat g = rep.evaluate_base(w);
      Eigen::EigenSolver<Mat> es(g);
      int top = 0;
      for (int i = 1; i < 3; ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(top).real()) top = i;
      Vec v = es.eigenvectors().col(top).real();
      v /= v(0);
      const Vec xi = v.tail(2).normalized();
      const auto bi = boundary_map(rep, xi, 40, x0);
      CHECK(sign_free(bi.point.lift, product_fixed_point(rep, w)) < 1e-4);
    }
  }
  SUBCASE("distinct outputs") {
    std::vector<Vec> out;
    for (int k = 0; k < 50; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 50;
      Vec xi(2);
      xi << std::cos(a), std::sin(a);
      out.push_back(boundary_map(deformed(), xi, 30, body_basepoint(deformed_body())).point.lift);
    }
    double mind = 1e300;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j) mind = std::min(mind, sign_free(out[i], out[j]));
    CHECK(mind > 1e-3);
  }
  Vec bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(boundary_map(fuchsian(), bad, 10, e0()), Error);
}

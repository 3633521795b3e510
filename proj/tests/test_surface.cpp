#include "doctest.h"

#include "adsanosov/gallery.hpp"
#include "adsanosov/surface.hpp"

#include <cmath>
#include <numbers>

using namespace ads;

namespace {

const ConvexBody& deformed_body() {
  static const auto b = convex_hull(limit_set_sample(product_deformed(), 3));
  return b;
}

// smoothed F^+ of the deformed hull at nu = 0.05, curvature evaluated
SurfaceMesh& deformed_mesh() {
  static SurfaceMesh m = [] {
    auto mm = mesh_from_body(deformed_body(), true);
    smooth_convolve(mm, 0.05);
    curvature_estimate(mm);
    return mm;
  }();
  return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

TEST_CASE("mollification fixes affine maps and smooths a hinge") {
  auto affine = mesh_from_function([](const Vec2& y) { return 0.3 + 0.2 * y(0) - 0.1 * y(1); }, 1);
  const auto ra = smooth_convolve(affine, 0.05);
  CHECK(ra.max_deviation_interior < 1e-13);
  CHECK(ra.lipschitz_after <= ra.lipschitz_before + 1e-12);

  const double nu = 0.05;
  auto hinge = mesh_from_function([](const Vec2& y) { return std::max(0.0, y(0)); }, 1);
  const auto rh = smooth_convolve(hinge, nu);
  CHECK(rh.convex);
  CHECK(rh.max_deviation <= nu);
  CHECK(rh.lipschitz_after <= rh.lipschitz_before + 1e-12);
  // closed-form Gaussian smoothing of the hinge: x Phi(x/nu) + nu phi(x/nu)
  double worst = 0.0;
  for (int j = 0; j < hinge.N; ++j)
    for (int i = 0; i < hinge.N; ++i) {
      if (!hinge.interior(i, j)) continue;
      const double x = hinge.y(i, j)(0);
      // kernel truncated at T and renormalized
      const double T = (hinge.band - 2) * hinge.h / nu, l = std::max(-T, -x / nu);
      const double Z = normal_cdf(T) - normal_cdf(-T);
      const double ref =
          l >= T ? 0.0 : (x * (normal_cdf(T) - normal_cdf(l)) + nu * (normal_pdf(l) - normal_pdf(T))) / Z;
      worst = std::max(worst, std::abs(hinge.psi_nu[hinge.index(i, j)] - ref));
    }
  MESSAGE("hinge closed-form error " << worst);
  CHECK(worst < 1e-3 * nu);
  CHECK(std::abs(rh.max_deviation_interior - nu * normal_pdf(0.0)) < 2e-3 * nu);

  // uniform convergence as nu -> 0
  double prev = 1e300;
  for (double v : {0.1, 0.05, 0.025, 0.0125}) {
    const double d = smooth_convolve(hinge, v).max_deviation;
    CHECK(d < prev);
    prev = d;
  }
  CHECK(smooth_convolve(hinge, 0.0).max_deviation == 0.0);
}

TEST_CASE("mollification errors") {
  auto m = mesh_from_function([](const Vec2&) { return 0.0; }, 1);
  CHECK_THROWS_AS(smooth_convolve(m, 0.25), Error);
  CHECK_THROWS_AS(smooth_convolve(m, -1.0), Error);
  auto small = mesh_from_function([](const Vec2&) { return 0.0; }, 1, 7, 0.5);
  CHECK_THROWS_AS(smooth_convolve(small, 0.24), Error);
}

TEST_CASE("spline interpolation reproduces the grid and smooth functions") {
  auto m = mesh_from_function([](const Vec2& y) { return 0.1 * std::cos(2.0 * y(0)) * std::sin(y(1) + 0.3); }, 1);
  for (int j = 0; j < m.N; j += 7)
    for (int i = 0; i < m.N; i += 5) CHECK(std::abs(psi_at(m, m.y(i, j)) - m.psi[m.index(i, j)]) < 1e-13);
  const Vec2 y(0.1234, -0.2345);
  CHECK(std::abs(psi_at(m, y) - 0.1 * std::cos(2.0 * y(0)) * std::sin(y(1) + 0.3)) < 1e-8);
}

TEST_CASE("curvature of totally geodesic and umbilic surfaces") {
  auto flat = mesh_from_function([](const Vec2&) { return 0.0; }, -1);
  auto rf = curvature_estimate(flat);
  CHECK(rf.K_min >= -1.0 - 1e-6);
  CHECK(rf.K_max <= -1.0 + 1e-6);
  CHECK(rf.max_slope < 1e-12);

  // Fuchsian hull: flat disk on the equator
  const auto fb = convex_hull(limit_set_sample(fuchsian_genus2(), 3));
  auto fm = mesh_from_body(fb, true);
  smooth_convolve(fm, 0.05);
  const auto rfb = curvature_estimate(fm);
  CHECK(std::abs(rfb.K_min + 1.0) < 1e-6);
  CHECK(std::abs(rfb.K_max + 1.0) < 1e-6);

  for (double c : {0.3, 1.0}) {
    auto cap = umbilic_cap_mesh(c);
    const auto rc = curvature_estimate(cap);
    MESSAGE("umbilic c = " << c << ": K in [" << rc.K_min << ", " << rc.K_max << "]");
    CHECK(std::abs(rc.K_min + 1.0 + c * c) < 1e-4);
    CHECK(std::abs(rc.K_max + 1.0 + c * c) < 1e-4);
  }
}

TEST_CASE("convexity control") {
  auto saddle = mesh_from_function([](const Vec2& y) { return 0.5 * (y(0) * y(0) - y(1) * y(1)); }, 1);
  const auto sr = smooth_convolve(saddle, 0.0);
  CHECK_FALSE(sr.convex);
  const auto rs = curvature_estimate(saddle);
  CHECK(rs.above_minus_one == rs.cells);
  CHECK(rs.K_max > -1.0);
  CHECK_THROWS_AS(cat_comparison_test(saddle, 4, 1), Error);

  auto bowl = mesh_from_function([](const Vec2& y) { return 0.4 * y.squaredNorm(); }, 1);
  CHECK(smooth_convolve(bowl, 0.0).convex);
  CHECK(curvature_estimate(bowl).K_max <= -1.0 + 1e-9);

  // timelike graph: slope above 1
  auto steep = mesh_from_function([](const Vec2& y) { return 1.5 * y(0); }, 1);
  CHECK_THROWS_AS(curvature_estimate(steep), Error);
}

TEST_CASE("smoothed deformed future boundary") {
  auto m = mesh_from_body(deformed_body(), true);
  const auto r = smooth_convolve(m, 0.05);
  MESSAGE("deviation " << r.max_deviation << " lip " << r.lipschitz_before << " -> " << r.lipschitz_after
                       << " min hessian " << r.min_hessian);
  CHECK(r.max_deviation < 2.0 * 0.05);
  CHECK(r.max_deviation > 0.0);
  CHECK(r.convex);
  CHECK(r.lipschitz_after <= r.lipschitz_before + 1e-12);
  const auto c = curvature_estimate(m);
  MESSAGE("K in [" << c.K_min << ", " << c.K_max << "], slope " << c.max_slope);
  CHECK(c.K_max <= -1.0 + 1e-2);
  CHECK(c.K_min < -1.0 - 1e-3);  // not flat
  CHECK(c.max_slope < 1.0 - kSpacelikeSlopeTol);

  // past boundary as well
  auto p = mesh_from_body(deformed_body(), false);
  CHECK(smooth_convolve(p, 0.05).convex);
  CHECK(curvature_estimate(p).K_max <= -1.0 + 1e-2);
}

TEST_CASE("comparison distance") {
  CHECK(std::abs(comparison_distance(1.0, 0.8, 0.7, 0.0) - 0.8) < 1e-12);
  CHECK(std::abs(comparison_distance(1.0, 0.8, 0.7, 0.7) - 1.0) < 1e-9);
  // right angle at p: cosh a = cosh b cosh c
  const double b = 0.6, c = 0.9, a = std::acosh(std::cosh(b) * std::cosh(c)), t = 0.4;
  CHECK(std::abs(comparison_distance(a, b, c, t) - std::acosh(std::cosh(b) * std::cosh(t))) < 1e-9);
}

TEST_CASE("geodesics and comparison triangles") {
  auto flat = mesh_from_function([](const Vec2&) { return 0.0; }, -1);
  curvature_estimate(flat);
  // flat patch is a piece of H^2 in the Klein chart: straight chords, distance from the form
  const Vec2 a(-0.3, 0.1), b(0.25, 0.2);
  const auto path = surface_geodesic(flat, a, b);
  const Vec xa = flat.embed(a, 0.0), xb = flat.embed(b, 0.0);
  CHECK(std::abs(path.length - std::acosh(-q_inner(xa, xb))) < 1e-9);
  const auto fr = cat_comparison_test(flat, 20, 3);
  for (const auto& t : fr.triangles) CHECK(std::abs(t.slack) < 1e-6);

  auto& m = deformed_mesh();
  const auto col = collinear_slack(m, Vec2(-0.2, -0.15), Vec2(0.22, 0.1));
  CHECK(std::abs(col.slack) < 1e-6);
  const auto cr = cat_comparison_test(m, 100, 11);
  MESSAGE("deformed min slack " << cr.min_slack);
  CHECK(cr.triangles.size() == 100);
  CHECK(cr.pass);
  CHECK(cr.min_slack >= -kCatSlackTol);
  const auto again = cat_comparison_test(m, 100, 11);
  CHECK(again.min_slack == cr.min_slack);
}

TEST_CASE("length metric under refinement") {
  auto coarse = mesh_from_body(deformed_body(), true, 61);
  auto fine = mesh_from_body(deformed_body(), true, 121);
  smooth_convolve(coarse, 0.05);
  smooth_convolve(fine, 0.05);
  const double ratio = length_refinement_ratio(coarse, fine);
  MESSAGE("refinement ratio deviation " << ratio);
  CHECK(ratio < 1e-2);
  CHECK_THROWS_AS(length_refinement_ratio(fine, coarse), Error);
}

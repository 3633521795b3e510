// Boundary graphs of the hull as spacelike surfaces in AdS_3: mollification, curvature, comparison triangles.
#pragma once

#include "adsanosov/convex_core.hpp"

#include <functional>
#include <vector>

namespace ads {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Square patch [-hw, hw]^2 of the affine chart u_0 = 1 of AdS_3. The surface is the graph
// t = sign * psi(y) with t = u_1 / u_0 and y = (u_2, u_3) / u_0; psi is convex for sign = +1 on the
// past boundary and sign = -1 on the future boundary.
struct SurfaceMesh {
  int N = 0;  // points per side
  double half_width = 0.5;
  double h = 0.0;
  int sign = -1;
  std::vector<double> psi, psi_nu;  // index i + N j, y = (-hw + i h, -hw + j h)
  double nu = 0.0;
  int band = 2;  // boundary band in cells; interior cells have band <= i, j < N - band
  std::vector<Mat2> I, II;
  std::vector<double> K;  // NaN off the interior
  std::vector<double> slope;  // conformal-chart gradient norm of the time function, interior
  std::vector<double> coef;   // cubic B-spline coefficients of psi_nu

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(N) * j; }
  Vec2 y(int i, int j) const { return {-half_width + i * h, -half_width + j * h}; }
  bool interior(int i, int j) const { return i >= band && j >= band && i < N - band && j < N - band; }
  Vec embed(const Vec2& y, double psi_value) const;
  Vec point(int i, int j) const { return embed(y(i, j), psi_nu[index(i, j)]); }
};

inline constexpr int kSurfacePoints = 121;
inline constexpr double kSurfaceHalfWidth = 0.5;

// Graph of F^+ (future = true) or F^- over the patch, from the fibers of the hull.
SurfaceMesh mesh_from_body(const ConvexBody& body, bool future, int N = kSurfacePoints,
                           double half_width = kSurfaceHalfWidth);
SurfaceMesh mesh_from_function(const std::function<double(const Vec2&)>& psi, int sign, int N = kSurfacePoints,
                               double half_width = kSurfaceHalfWidth);
// Equidistant surface at time distance atan(c) from the equator: shape operator c Id.
SurfaceMesh umbilic_cap_mesh(double c, int N = kSurfacePoints, double half_width = kSurfaceHalfWidth);

inline constexpr double kKernelTruncation = 4.0;  // in units of nu

struct SmoothingReport {
  double nu = 0.0;
  double max_deviation = 0.0;           // max |psi_nu - psi| over the whole grid
  double max_deviation_interior = 0.0;
  double lipschitz_before = 0.0, lipschitz_after = 0.0;
  double min_hessian = 0.0;  // min second difference per unit length^2 along axes and diagonals, interior
  bool convex = false;       // min_hessian >= -1e-8
};
// Truncated normalized Gaussian, separable, reflection padding; nu = 0 copies psi.
SmoothingReport smooth_convolve(SurfaceMesh& mesh, double nu);
// max |d psi| / |d y| over the four neighbor directions of the grid.
double grid_lipschitz(const std::vector<double>& v, int N, double h);

inline constexpr double kSpacelikeSlopeTol = 1e-6;

struct CurvatureReport {
  std::size_t cells = 0;
  double K_min = 0.0, K_max = 0.0;
  double max_slope = 0.0;
  std::size_t above_minus_one = 0;  // cells with K > -1 + 1e-9
};
// I and II by central differences of the embedding; K = -1 - det(II I^-1).
CurvatureReport curvature_estimate(SurfaceMesh& mesh);

// Energy-minimizing polyline between chart points (segments of AdS length, M segments).
struct SurfacePath {
  std::vector<Vec2> y;
  std::vector<double> seg;  // segment lengths
  double length = 0.0;
  double partial(std::size_t k) const;  // length of the first k segments
};
inline constexpr int kPathSegments = 32;
SurfacePath surface_geodesic(const SurfaceMesh& mesh, const Vec2& a, const Vec2& b, int M = kPathSegments);
// psi_nu interpolated by tensor cubic splines (C^2).
double psi_at(const SurfaceMesh& mesh, const Vec2& y);

struct TriangleSlack {
  Vec2 p, q, r;
  double a = 0.0, b = 0.0, c = 0.0;  // |qr|, |pr|, |pq|
  double pm = 0.0;                    // |pm|, m on the side pq
  double actual = 0.0, comparison = 0.0, slack = 0.0;
};
struct CatReport {
  std::vector<TriangleSlack> triangles;
  double min_slack = 0.0;
  bool pass = false;  // min_slack >= -1e-3
};
inline constexpr double kCatSlackTol = 1e-3;
// H^2 comparison distance from r to the point at distance pm from p on the side pq.
double comparison_distance(double a, double b, double c, double pm);
TriangleSlack triangle_slack(const SurfaceMesh& mesh, const Vec2& p, const Vec2& q, const Vec2& r, int k_m);
CatReport cat_comparison_test(const SurfaceMesh& mesh, int triangles, unsigned long long seed);
// Collinear control: r is the middle vertex of the geodesic pq.
TriangleSlack collinear_slack(const SurfaceMesh& mesh, const Vec2& p, const Vec2& q);

// Max |d_fine / d_coarse - 1| for grid-adjacent coarse points; fine must have 2N - 1 points on the same patch.
double length_refinement_ratio(const SurfaceMesh& coarse, const SurfaceMesh& fine);

}  // namespace ads

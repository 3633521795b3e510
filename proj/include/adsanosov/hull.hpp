// Incremental (beneath-beyond) convex hull of points in R^d, d <= 5, with affine-degeneracy handling.
#pragma once

#include "adsanosov/ambient.hpp"

#include <span>
#include <vector>

namespace ads {

struct HullFacet {
  std::vector<int> verts;  // simplicial: exactly k vertices in the k-dimensional affine hull
  Vec normal;              // unit, ambient R^d, outward
  double offset = 0.0;     // normal . x <= offset inside
};

struct Hull {
  int dim = 0;         // ambient dimension d
  int affine_dim = 0;  // dimension of the affine hull
  bool degenerate = false;
  double spread_sigma_min = 0.0;  // smallest singular value of the spread matrix, / sqrt(N)
  Vec origin;                     // centroid
  Mat basis;                      // d x affine_dim, orthonormal
  Mat normal_space;               // d x (d - affine_dim), orthonormal; equality constraints
  std::vector<HullFacet> facets;  // in the affine hull; normals lie in span(basis)
  std::vector<int> vertices;      // sorted indices of extreme points

  bool contains(const Vec& x, double tol = 1e-9) const;
  double max_violation(const Vec& x) const;  // max over facets and equality rows
};

inline constexpr double kDegenerateSigma = 1e-6;

Hull convex_hull_points(std::span<const Vec> pts, double degenerate_sigma = kDegenerateSigma);

// Exhaustive facet planes (for small inputs); normalized (normal, offset) rows of supporting hyperplanes
// touching at least affine_dim affinely independent points.
std::vector<std::pair<Vec, double>> brute_force_facet_planes(std::span<const Vec> pts, double tol = 1e-9);
// Reduces a facet list to distinct supporting planes.
std::vector<std::pair<Vec, double>> distinct_planes(const Hull& h, double tol = 1e-9);

}  // namespace ads

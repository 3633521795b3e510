// Convex hull of a limit-set sample in an affine chart, boundary graphs, caps, enlargement.
#pragma once

#include "adsanosov/hull.hpp"
#include "adsanosov/reps.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ads {

struct ConvexBody {
  int n = 2;
  Vec w;   // chart covector, <y, w> < 0 on the sample
  Vec yc;  // chart origin, <yc, w> = -1
  Mat E;   // (n+2) x (n+1), Euclidean-orthonormal basis of w^perp (q-orthogonal complement)
  double theta_ref = 0.0;
  std::vector<Vec> lifts;  // sample points (null), sign-fixed
  std::vector<Vec> chart;  // chart coordinates of lifts
  Hull hull;
  std::vector<Vec> facet_v;     // lifted covectors, <y, v> <= 0 on the body, Euclidean unit
  std::vector<int> facet_side;  // +1 future boundary, -1 past boundary, 0 degenerate
  std::vector<Vec> equality_v;  // degenerate bodies: <y, v> = 0 on the body
  std::vector<std::vector<int>> faces;  // facets and their sub-simplices with >= 2 vertices
  Mat cell_basis;                        // degenerate bodies: orthonormal basis of the span of the lifts

  Vec to_chart(const Vec& y) const;    // y with <y, w> < 0
  Vec from_chart(const Vec& c) const;  // point on the affine hyperplane <z, w> = -1
  bool in_chart(const Vec& y) const { return q_inner(y, w) < 0.0; }
  bool contains(const Vec& y, double tol = 1e-9) const;
  double max_violation(const Vec& y) const;  // max <y/|y|, v> over facet covectors, |.| over equalities
  bool contains_chart(const Vec& c, double tol = 1e-9) const { return hull.contains(c, tol); }
  bool degenerate() const { return hull.degenerate; }
};

ConvexBody convex_hull(const LimitSetSample& sample);
// Raw constructor: lifts used as given (no sign fixing); for control bodies.
ConvexBody convex_hull_lifts(int n, std::vector<Vec> lifts, double theta_ref = 0.0);

struct SupportReport {
  std::vector<double> minus_q;  // -q(v) per facet, v Euclidean unit; positive = spacelike support plane
  double min_minus_q = 0.0;
  std::size_t facets = 0;
  bool pass = false;  // all > 1e-8
};
inline constexpr double kSpacelikeSupportTol = 1e-8;
SupportReport support_spacelike_check(const ConvexBody& body);

// General fiber u(theta) = cos(theta) A + sin(theta) B + C; closed theta-interval inside the body.
struct ThetaInterval {
  double lo = 0.0, hi = 0.0;
  int lo_facet = -1, hi_facet = -1;  // constraint attaining each end (-1: equality or chart)
};
std::optional<ThetaInterval> fiber_interval(const ConvexBody& body, const Vec& A, const Vec& B, const Vec& C,
                                            double eq_tol = 1e-9);
// Fiber over a hemisphere point Y in conformal coordinates.
std::optional<ThetaInterval> conformal_fiber(const ConvexBody& body, const Vec& Y);
// Timelike geodesic through the negative-definite plane spanned by P (columns, q-orthonormal).
ThetaInterval timelike_intersection(const ConvexBody& body, const Mat& P);

struct BoundaryGraphs {
  std::vector<Vec> grid;
  std::vector<double> F_minus, F_plus;
  std::vector<int> support_minus, support_plus;  // facet index attaining each value
  double min_gap = 0.0;           // min F+ - F-
  double min_margin_minus = 0.0;  // min F- - f-
  double min_margin_plus = 0.0;   // min f+ - F+
  double lipschitz = 0.0;         // max ratio over grid pairs, both graphs
};
BoundaryGraphs boundary_graphs(const ConvexBody& body, const RegularDomain& rd);

// Time function of a single facet plane over the fiber through Y: the theta solving <u(theta), v> = 0 nearest ref.
std::optional<double> facet_time(const Vec& v, const Vec& Y, double ref);

struct ConvexCap {
  Vec v;                         // q(v) > 0
  std::vector<int> plus, minus;  // body sample indices with <y, v> >= 0 resp. <= 0
  std::vector<Vec> wall;         // points of the wall on hull edges (null-vector combinations)
  double diameter_plus = 0.0;    // Euclidean ray diameter of the plus cap's boundary sample + wall
  double diameter_minus = 0.0;
  bool contains(const ConvexBody& body, const Vec& y, bool plus_side, double tol = 1e-9) const;
};
ConvexCap convex_cap(const ConvexBody& body, const Vec& v);
// Unit spacelike v orthogonal to the geodesic from x toward the ideal point l, at distance s from x.
Vec wall_toward(const Vec& x, const Vec& l, double s);

// Time separation from the boundary part of the body facing x (0 inside); nullopt if causally unrelated.
std::optional<double> time_separation(const ConvexBody& body, const Vec& x);
bool eps_membership(const ConvexBody& body, double eps, const Vec& x);

// Barycenter of the sample lifts normalized to q = -1 (default Dirichlet basepoint).
Vec body_basepoint(const ConvexBody& body);

struct AgreementReport {
  std::size_t tested = 0, band_skipped = 0, disagreements = 0, inside = 0;
};
// Compares membership in the hull with membership in E(Lambda) on random conformal points.
AgreementReport hull_regular_agreement(const ConvexBody& body, const RegularDomain& rd, std::size_t samples,
                                       unsigned long long seed, double band = 1e-2);

}  // namespace ads

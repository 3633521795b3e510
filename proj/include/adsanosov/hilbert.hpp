// Hilbert metric of convex bodies in an affine chart: Klein ball, hull polytope, epsilon-enlarged hull.
#pragma once

#include "adsanosov/convex_core.hpp"

#include <functional>
#include <string>

namespace ads {

struct HilbertContext {
  std::string kind;  // "ball", "hull", "hull-eps"
  int dim = 0;       // chart dimension
  double eps = 0.0;
  const ConvexBody* body = nullptr;  // not owned; null for the ball
  // largest s > 0 with x + s d in the closed body
  std::function<double(const Vec& x, const Vec& d)> exit;
};

inline constexpr double kChordTol = 1e-13;   // relative bisection tolerance on chord parameters
inline constexpr double kUnboundedChord = 1e8;

HilbertContext ball_context(int dim);
HilbertContext hull_context(const ConvexBody& body);
HilbertContext eps_context(const ConvexBody& body, double eps);

struct Chord {
  double t_minus = 0.0, t_plus = 1.0;  // boundary points x + t (y - x)
};
Chord chord(const HilbertContext& ctx, const Vec& x, const Vec& y);

// d = 1/2 |log CR|, chart coordinates.
double hilbert_distance(const HilbertContext& ctx, const Vec& x, const Vec& y);
// Same on vectors of R^{2,n} (context built from a body).
double hilbert_distance_lifted(const HilbertContext& ctx, const Vec& X, const Vec& Y);

// Spacelike AdS length arccosh(-<x, y>) for q(x) = q(y) = -1.
double ads_spacelike_length(const Vec& x, const Vec& y);
// Hyperbolic distance on the Klein ball from the form of signature (1, dim).
double klein_distance(const Vec& x, const Vec& y);

struct CalibrationReport {
  std::size_t pairs = 0;
  double max_error = 0.0;  // |d_Hilbert - d_Klein|
};
// Uniform pairs in the ball of radius 0.95, dimensions 2 and 3.
CalibrationReport klein_calibration(std::size_t pairs, unsigned long long seed);

struct ChordReport {
  std::size_t tested = 0, rejected = 0;
  double max_error = 0.0;  // |d_Hilbert - AdS length| on chords with endpoints on the sample
};
// Pairs of hull vertices with <p, q> < -1e-3 whose open segment crosses the interior.
ChordReport limit_chord_check(const ConvexBody& body, std::size_t pairs, unsigned long long seed);

}  // namespace ads

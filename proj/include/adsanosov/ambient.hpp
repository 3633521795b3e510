// Quadratic space R^{2,n}, conformal model of AdS_{n+1} and Ein_n, causal predicates.
#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ads {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorKind { invariant = 1, certification = 2, bad_input = 3 };

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

inline constexpr double kCausalTol = 1e-9;
inline constexpr double kResidualTol = 1e-10;

// Gram matrix diag(-1,-1,1,...,1) of size n+2.
Mat gram(int n);
// J u for the standard signature; cheap form of gram(n) * u.
Vec lower(const Vec& u);

double q_inner(const Vec& u, const Vec& v);
inline double q_norm2(const Vec& u) { return q_inner(u, u); }

// Paired coordinates are stored as (a1, a2, b1, b2, x1, ..., x_{n-2}).
Vec paired_to_standard(const Vec& p);
Vec standard_to_paired(const Vec& u);
// -a1 b1 - a2 b2 + sum x_i^2, the form for which paired_to_standard is an isometry.
double q_paired(const Vec& p);

struct EinPoint {
  Vec lift;  // null, unit Euclidean norm; the sign is meaningful
  static EinPoint from_null(const Vec& v);
  int dim() const { return static_cast<int>(lift.size()) - 2; }
};

struct AdSPoint {
  Vec lift;  // q(lift) = -1
  static AdSPoint from_timelike(const Vec& v);
};

struct Conformal {
  double theta = 0.0;
  Vec Y;  // unit vector in R^{n+1}, Y(0) >= 0
};

enum class Causal { timelike, lightlike, unrelated };
const char* to_string(Causal c);

Conformal to_conformal(const AdSPoint& p);
Conformal to_conformal(const EinPoint& p);
AdSPoint ads_from_conformal(const Conformal& c);
EinPoint ein_from_conformal(const Conformal& c);

// Great-circle distance between unit vectors; stable near 0 and pi.
double sphere_distance(const Vec& a, const Vec& b);
// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// Einstein-static-universe causality on a common branch of theta.
Causal causal_relation(const Conformal& p, const Conformal& q, double tol = kCausalTol);

// Greedy breadth-first sign choice so all pairwise products are <= tol.
std::vector<EinPoint> sign_fix_lifts(std::span<const Vec> points, double tol = 1e-8);

}  // namespace ads

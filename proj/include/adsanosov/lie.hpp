// SO(2,n): membership, Cartan decomposition, sequence dynamics on Ein.
#pragma once

#include "adsanosov/ambient.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ads {

inline constexpr double kGroupTol = 1e-8;

struct GroupElement {
  Mat m;
  std::string word;
  int n() const { return static_cast<int>(m.rows()) - 2; }
};

// Validates membership in SO_0(2,n); throws Error(invariant) naming the violation.
GroupElement membership_check(const Mat& M, std::string word = {}, double tol = kGroupTol);
// Inverse via J M^T J.
Mat group_inverse(const Mat& M);

// a(lambda, mu) in standard coordinates: boosts in the (e_0, e_n) and (e_1, e_{n+1}) planes.
Mat cartan_a(int n, double lambda, double mu);
// Poles of a(lambda, mu) with lambda > mu: the a1 and b1 rays, unit Euclidean norm.
Vec x0_plus(int n);
Vec x0_minus(int n);

struct CartanTriple {
  Mat k;  // block-orthogonal, fixes the negative 2-plane span(e_0, e_1)
  double lambda = 0.0;
  double mu = 0.0;
  Mat l;
  Mat reconstruct() const;
};

CartanTriple cartan_decompose(const Mat& g);

enum class Distortion { balanced, unbalanced };
const char* to_string(Distortion d);

inline constexpr double kBalancedThreshold = 1e-3;

struct SequenceClass {
  Distortion kind = Distortion::unbalanced;
  double nu_hat = 0.0;
  std::vector<double> lambda_trace, mu_trace;  // of the extracted subsequence
  std::vector<std::size_t> subsequence;        // indices into the input
  double trend_slope = 0.0;                    // d(mu - lambda)/d lambda on the subsequence
  double trend_r2 = 0.0;
  Mat k_inf, l_inf;
  double tail_residual_plus = 0.0;  // ray distance between the last two attracting directions
  double tail_residual_minus = 0.0;
  int n = 2;
};

SequenceClass classify_sequence(std::span<const Mat> gs);

struct PoleData {
  EinPoint x_plus, x_minus;
  // Omega^+(x^-): points y with <y, x^-> != 0 of the sign that flows to x^+.
  bool in_basin_of_plus(const Vec& y, double tol = 1e-12) const;
  // Hemisphere D^- = { y : ||.||_0 inner product with x^+ > 0 }.
  bool in_hemisphere(const Vec& y) const;
};

struct PhotonData {
  Mat delta_plus;   // (n+2) x 2 orthonormal basis of an isotropic plane
  Mat delta_minus;
  double nu = 1.0;
  Mat k_inf, l_inf;
  // Partial projections; empty where undefined.
  std::optional<EinPoint> pi_plus(const Vec& x) const;
  std::optional<EinPoint> pi_minus(const Vec& x) const;
};

std::variant<PoleData, PhotonData> poles_and_photons(const SequenceClass& sc);

struct LipschitzReport {
  double eta = 0.0;
  double image_radius = 0.0;
  std::size_t net_size = 0;
};

// Sampled Lipschitz constant of y -> g y / |g y| on the cone C^-(eps) of g.
LipschitzReport lipschitz_bound(const Mat& g, double eps);

// Smallest singular value of the differential of the normalized action of g^{-1} on Ein at x.
double inverse_expansion_at(const Mat& g, const EinPoint& x);

struct DistortionScan {
  std::vector<double> lambda, mu;  // sorted by lambda, ascending
  std::vector<std::string> words;
  double envelope_slope = 0.0;
  double tail_max_gap = 0.0;  // max of mu - lambda over the tail
  double tail_max_nu = 0.0;
  double mu_max = 0.0;
  std::size_t tail_size = 0;
  bool no_balanced_tail = true;
};

DistortionScan balanced_distortion_scan(std::span<const Mat> gs, std::span<const std::string> words = {});

// Spectral helpers.
struct Spectrum {
  std::vector<double> log_moduli;  // descending
};
Spectrum log_eigen_moduli(const Mat& g);
// Unit null top eigenvector (attracting fixed point) when the top eigenvalue is real and simple.
std::optional<Vec> attracting_fixed_point(const Mat& g, double gap_tol = 1e-6);

}  // namespace ads

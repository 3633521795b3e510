// Dirichlet domains in AdS, tiling checks, generating sets, orbit quasi-isometry, boundary map.
#pragma once

#include "adsanosov/convex_core.hpp"
#include "adsanosov/reps.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ads {

struct HalfSpace {
  std::string word;
  Mat m;  // rho(word)
  Vec u;  // rho(word) x0 - x0; D(word) = {<x, u> < 0}
};

struct DirichletApprox {
  int n = 2;
  Vec x0;
  int R = 1;
  std::size_t candidates = 0;     // non-identity ball elements before pruning
  std::vector<HalfSpace> entries;  // active (or all, unpruned)
  std::vector<HalfSpace> moves;    // hill-climb steps: entries plus generator letters

  // max <x, u> / (|x| |u|) over entries; <= 0 on the closed domain
  double excess(const Vec& x) const;
  bool in_closure(const Vec& x, double tol = 1e-7) const { return excess(x) <= tol; }
};

inline constexpr double kWallTol = 1e-7;

// Builds half-spaces over the word ball; entries never first-hit on chords from x0 to sampled boundary
// points of the hull are dropped when prune is set.
DirichletApprox dirichlet_build(const Representation& rep, const ConvexBody& body, const Vec& x0, int R,
                                bool prune = true, std::size_t prune_samples = 4000,
                                unsigned long long seed = 1);

struct Location {
  std::string word;
  Mat m;
  double xi = 0.0;  // <x, rho(word) x0>
  int steps = 0;
};
inline constexpr int kLocateCap = 10000;
Location locate_domain(const Vec& x, const DirichletApprox& approx);

struct TilingReport {
  std::size_t samples = 0;
  std::size_t covered = 0;
  std::size_t uncovered = 0;
  std::size_t interior_overlaps = 0;  // samples with >= 2 translates containing them in the interior
  std::size_t boundary_ties = 0;      // samples on a wall within tolerance
  std::size_t max_local = 0;           // max count of closed translates meeting a sample
  double mean_local = 0.0;
  double diameter = 0.0;  // Hilbert diameter of sampled D inter Conv
  double wall_tol = kWallTol;
  bool pass() const { return uncovered == 0 && interior_overlaps == 0; }
};
// Samples are drawn in the hull body; neighbors are tested over the moves of the approximation.
TilingReport tiling_tests(const DirichletApprox& approx, const ConvexBody& body, std::size_t samples,
                          unsigned long long seed, double wall_tol = kWallTol);
// Random interior points of the hull body (lifted), for tiling-style scans.
std::vector<Vec> hull_samples(const ConvexBody& body, std::size_t count, unsigned long long seed);

struct GenElement {
  std::string word;
  Mat m;
};
// Words whose translates share a wall with D, closed under inversion.
std::vector<GenElement> generating_set(const DirichletApprox& approx);

struct QIFit {
  double a = 1.0, b = 0.0;
  double slope = 0.0;  // least-squares slope of d^H against d_S
  std::size_t pairs = 0, skipped = 0;
};
// Pairs (1, g) over the S-ball of radius RS; d^H in the hull body, pairs leaving the body skipped.
QIFit qi_fit(const DirichletApprox& approx, const ConvexBody& body, const std::vector<GenElement>& S, int RS,
             std::size_t stride = 1);

struct BoundaryImage {
  EinPoint point;
  double residual = 0.0;  // Cauchy tail: max ray distance of the last steps to the final direction
  std::vector<std::string> words;
};
inline constexpr double kBoundaryStep = 0.5;
// Minkowski form of R^{1,n}.
double minkowski(const Vec& a, const Vec& b);

// Follows a unit-speed geodesic of the base H^n and keeps the base orbit element g nearest to the
// ray point; point and tangent are stored in the frame of g, so they stay O(1) at any time.
class OrbitWalker {
 public:
  OrbitWalker(const Representation& rep, const Vec& base, const Vec& tangent);
  void advance(double dt);
  const Vec& local_point() const { return y_; }
  const Vec& local_tangent() const { return eta_; }
  const Mat& rho() const { return G_; }  // rho(word) in SO(2,n)
  const std::string& word() const { return word_; }
  double time() const { return t_; }

 private:
  void climb();
  const Representation* rep_;
  Vec o_, y_, eta_;
  Mat G_;
  std::string word_;
  double t_ = 0.0;
  std::vector<char> letters_;
  std::vector<Vec> images_;
  std::vector<Mat> inv_;
};

BoundaryImage boundary_map_ray(const Representation& rep, const Vec& base, const Vec& tangent, int depth,
                               const Vec& x0);
// xi: unit vector of R^n (ideal point of the base H^n); follows the base geodesic ray from e_0.
BoundaryImage boundary_map(const Representation& rep, const Vec& xi, int depth, const Vec& x0);

}  // namespace ads

// Geodesic flow of the base H^n, orbit-atom metrics on Ein_n, contraction certificate.
#pragma once

#include "adsanosov/convex_core.hpp"
#include "adsanosov/dirichlet.hpp"
#include "adsanosov/reps.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ads {

inline constexpr double kFlowTol = 1e-10;
inline constexpr double kGridStep = 0.25;
inline constexpr int kEndpointDepth = 60;

struct FlowPoint {
  Vec base;     // q_{1,n} = -1
  Vec tangent;  // q_{1,n} = 1, orthogonal to base
  Vec xi_plus, xi_minus;  // unit vectors of R^n
};

// Normalizes, checks the constraints and caches the endpoints.
FlowPoint make_flow_point(const Vec& base, const Vec& tangent);
FlowPoint flow_step(const FlowPoint& p, double t);
FlowPoint transform(const Mat& base_g, const FlowPoint& p);
double hyperbolic_distance(const Vec& a, const Vec& b);
// Point on the axis of a loxodromic base element nearest to e_0, pointing to the attracting end.
FlowPoint axis_flow_point(const Mat& base_g);

struct MetricAtom {
  Vec x;  // q = -1
  Vec V;  // q = -1, <x, V> = 0
};
// ||u||^2_{x,V} = q(u) + 2 <u,x>^2 + 2 <u,V>^2
double atom_inner(const MetricAtom& a, const Vec& u, const Vec& v);
// Norm of the tangent vector w at z (null) for the round metric of the ||.||_{x,V}-unit sphere.
double metric_norm(const MetricAtom& a, const Vec& z, const Vec& w);
Mat metric_gram(const MetricAtom& a, const Vec& z, const Mat& W);
MetricAtom transform(const Mat& g, const MetricAtom& a);

// V on the orbit of x0 is transported equivariantly; inside a domain the atom is moved along the
// geodesic from x0 by the local offset of the ray point (offset = false keeps the bare orbit atom).
struct MetricFamily {
  Vec x0, V0;
  Mat frame;  // (n+2) x n, q-orthonormal, orthogonal to x0 and V0: image of the base tangent e_1..e_n
  bool offset = true;
};
// Default: x0 = e_0, V0 = e_1, frame e_2..e_{n+1}.
MetricFamily default_family(int n);
MetricFamily rotated_family(int n, double s);  // V0 boosted by s in the (e_1, e_2) plane, frame adjusted
MetricAtom local_atom(const MetricFamily& fam, const Vec& y);
MetricAtom walker_atom(const MetricFamily& fam, const OrbitWalker& w);

struct Endpoints {
  EinPoint plus, minus;
  double residual = 0.0;
};
Endpoints endpoint_maps(const FlowPoint& p, const Representation& rep, const Vec& x0, int depth = kEndpointDepth);
// n x n basis of T_z Ein: q-orthogonal complement of span(z, z') with z' the opposite endpoint.
Mat tangent_basis(const Vec& z, const Vec& zother);

// Gram matrix of the walker's metric at (z, W), evaluated in the walker's frame.
Mat walker_gram(const MetricFamily& fam, const OrbitWalker& w, const Vec& z, const Mat& W);

// Extreme generalized eigenvalues of G1 against G0.
struct Ratio {
  double min = 1.0, max = 1.0;
};
Ratio metric_ratio(const Mat& G0, const Mat& G1);

struct AlphaTable {
  std::vector<double> t;
  std::vector<double> alpha_minus;  // sup ratio at l^-
  std::vector<double> alpha_plus;   // inf ratio at l^+
  double rate_minus = 0.0, r2_minus = 0.0;
  double rate_plus = 0.0, r2_plus = 0.0;
};
AlphaTable alpha_cocycle(const FlowPoint& p, const Representation& rep, const MetricFamily& fam, double t_max,
                         const Endpoints* ends = nullptr);
double doubling_time(const FlowPoint& p, const Representation& rep, const MetricFamily& fam, double C, double T_max,
                     const Endpoints* ends = nullptr);
// Closed-form alpha^- rate on the axis of w: -2 (l1 - l2) / base translation length.
double axis_rate(const Representation& rep, const std::string& w);

// Sampled sup of norm ratios between metrics at base points closer than delta (dyadic ladder, monotone).
double distortion_constant(const Representation& rep, const MetricFamily& fam, double delta, std::size_t samples,
                           unsigned long long seed);

struct RecurrenceReport {
  std::vector<std::string> words;
  std::vector<double> lambda;
  std::vector<double> inverse_expansion;  // at x^+, sorted by lambda
  std::vector<double> diameters;          // plus-cap diameters
  bool plus_in_caps = true;
  bool minus_in_dminus = true;
  bool nested = true;
  bool expansion_increasing = true;
  double diameter_rate = 0.0;  // fitted log slope per cap
};
// periodic: gamma_n = word^n up to word length R; otherwise return words of the orbit walk up to time R.
RecurrenceReport recurrence_caps(const FlowPoint& p, const Representation& rep, const ConvexBody& body, int R,
                                 const std::string& periodic = {});

struct ConjugacyPoint {
  Vec point;          // AdS point on the spacelike geodesic
  Vec lplus, lminus;  // endpoint lifts, <lplus, lminus> < 0
};
// Fiber coordinate: the foot of xb on the AdS geodesic matches the foot of the base point o (default e_0).
ConjugacyPoint conjugacy_map(const FlowPoint& p, const Representation& rep, const Vec& xb, const Vec& x0,
                             const Vec* o = nullptr);

struct SampleRecord {
  std::size_t id = 0;
  FlowPoint p;
  double doubling_t = 0.0;  // both factor 2 at l^+ and 1/2 at l^-
  double factor = 0.0;      // alpha^+ at doubling_t
  double factor_minus = 0.0;
  std::vector<std::pair<double, double>> alpha_minus;
  double rate = 0.0, r2 = 0.0;
  bool chained_ok = true;
  bool pass = false;
  std::string failure;
};
struct NetSection {
  std::size_t id = 0;
  Vec center;
  std::size_t members = 0;
  double return_time = 0.0;
};
struct CertifyConfig {
  std::size_t samples = 200;
  double T_max = 50.0;
  unsigned long long seed = 1;
  double fit_time = 8.0;
  double delta = 0.5;
  std::size_t net_size = 16;
  double sample_radius = 1.6;
};
struct ContractionCertificate {
  bool pass = false;
  std::vector<SampleRecord> samples;
  std::vector<NetSection> net;
  double C_delta = 1.0;
  double T = 0.0;  // max section return time
  double a = 1.0;  // sup alpha^- over [0, T]
  CertifyConfig config;
};
// Throws Error(certification) when the acausality precondition fails.
ContractionCertificate certify(const Representation& rep, const CertifyConfig& cfg);
std::vector<FlowPoint> flow_samples(int n, std::size_t count, double radius, unsigned long long seed);

}  // namespace ads

// Representations into SO(2,n), word balls, limit-set samples, regular domains.
#pragma once

#include "adsanosov/ambient.hpp"
#include "adsanosov/lie.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ads {

enum class BaseKind { fuchsian_lattice, deformed, product, custom };
const char* to_string(BaseKind k);
BaseKind base_kind_from(std::string_view s);

struct ProductData {
  std::vector<Mat> left, right;  // 2x2, det 1
};

// Lattice in SO(1,p) x SO(1,q) acting on R^{1,p} + R^{1,q}; only p = q = 1 at desk scale.
struct SplitConstruction {
  int p = 1, q = 1;
};

struct Representation {
  int n = 2;
  std::vector<std::string> labels;  // single lowercase letters; uppercase is the inverse
  std::vector<Mat> gens;
  std::vector<std::string> relators;
  std::optional<ProductData> product;
  std::vector<Mat> base;  // SO(1,n) generators of the base hyperbolic structure, optional
  BaseKind kind = BaseKind::custom;
  std::optional<SplitConstruction> split;

  int index_of(char c) const;  // throws on unknown letter
  Mat letter(char c) const;
  Mat base_letter(char c) const;
  Mat evaluate(std::string_view w) const;
  Mat evaluate_base(std::string_view w) const;
  bool has_base() const { return !base.empty(); }
};

// Throws Error(invariant / bad_input) when a generator or relator check fails.
void validate(const Representation& rep);
double relator_residual(const Representation& rep, std::string_view w);

std::string inverse_word(std::string_view w);
std::string reduce_word(std::string_view w);

// Block embedding SO(1,n) -> SO(2,n) fixing e_1 (the second negative direction).
Mat fuchsian_embed_matrix(const Mat& g);
Representation fuchsian_embed(const std::vector<Mat>& gens, std::vector<std::string> labels,
                              std::vector<std::string> relators = {});

// R^{2,2} = 2x2 matrices, M(u) = [[u0+u2, u3-u1], [u3+u1, u0-u2]], q = -det.
Mat matrix_of_vector(const Vec& u);
Vec vector_of_matrix(const Mat& M);
Mat product_embed_matrix(const Mat& A, const Mat& B);
Representation product_embed(const std::vector<Mat>& left, const std::vector<Mat>& right,
                             std::vector<std::string> labels, std::vector<std::string> relators = {});
// SL(2,R) -> SO(1,2) on (u0, u2, u3) via S -> A S A^T on symmetric matrices.
Mat sl2_to_so12(const Mat& A);

struct WordElement {
  std::string word;
  Mat m;
};

inline constexpr std::size_t kWordBallCap = 3'000'000;

std::vector<WordElement> enumerate_words(const std::vector<std::string>& labels, const std::vector<Mat>& gens,
                                         int R, std::size_t cap = kWordBallCap, double dedup_tol = 1e-7);
// Depth-first over all freely reduced words, no deduplication; constant memory.
void for_each_reduced_word(const std::vector<std::string>& labels, const std::vector<Mat>& gens, int R,
                           const std::function<void(const std::string&, const Mat&)>& f);
std::vector<WordElement> word_ball(const Representation& rep, int R, std::size_t cap = kWordBallCap);

// Cartan projections of all reduced words of length <= R in the given letters; keeps the top-lambda words.
struct WordScan {
  std::vector<std::string> words;  // descending lambda
  std::vector<double> lambda, mu;
  std::size_t scanned = 0;
  double max_gap = -1e300;  // max mu - lambda over the kept words
};
WordScan top_lambda_words(const Representation& rep, const std::string& letters, int R, std::size_t keep);
std::vector<WordElement> base_word_ball(const Representation& rep, int R, std::size_t cap = kWordBallCap);

enum class Verdict { acausal, achronal_not_acausal, not_achronal };
const char* to_string(Verdict v);

struct LipschitzGraph {
  std::vector<Vec> grid;       // points of S^{n-1}, embedded as Y with Y_0 = 0
  std::vector<double> theta;   // fitted values
  double lipschitz = 0.0;      // max ratio over grid pairs
};

struct LimitSetSample {
  int n = 2;
  std::vector<EinPoint> points;
  std::vector<std::string> words;
  std::vector<Conformal> conf;  // theta unwrapped against the first point
  Verdict verdict = Verdict::acausal;
  double margin = 0.0;          // 1 - max |dtheta| / d over pairs
  double max_ratio = 0.0;
  std::size_t lightlike_pairs = 0;
  std::size_t timelike_pairs = 0;
  double min_lightlike_residual = 1e300;  // min | |dtheta| - d | over pairs
  double max_pair_product = -1e300;       // max <p, q> over pairs
  double min_separation = 0.0;            // smallest spherical distance in the Y sphere
  LipschitzGraph graph;
};

// Computes conformal coordinates, pairwise verdict and fitted graph for sign-fixed points.
LimitSetSample analyze_sample(int n, std::vector<EinPoint> points, std::vector<std::string> words);
LimitSetSample limit_set_sample(const Representation& rep, int R, std::size_t min_points = 8);
// Pointwise ground truth for product representations.
Vec product_fixed_point(const Representation& rep, std::string_view word);

struct RegularDomain {
  std::vector<Vec> grid;  // hemisphere points Y (Y_0 >= 0)
  std::vector<double> f_minus, f_plus;
  std::vector<double> theta;  // sample, for evaluation off the grid
  std::vector<Vec> Ys;
  double eval_plus(const Vec& Y) const;
  double eval_minus(const Vec& Y) const;
  bool contains(const Conformal& c, double tol = 0.0) const;
};

// Deterministic points of S^k in R^{k+1}, k = 1 (uniform circle) or 2 (Fibonacci).
std::vector<Vec> sphere_grid(int k, int count);
std::vector<Vec> hemisphere_grid(int n, int rings, int per_ring);
RegularDomain regular_domain_bounds(const LimitSetSample& s, int rings = 16, int per_ring = 48);

struct SplitExample {
  Representation rep;
  LimitSetSample sample;
};

// Torus universe: Lambda is four lightlike arcs joining {p+} to {q+} in Ein_2.
SplitExample nonacausal_example(int n, int p, int q, double rapidity_p, double rapidity_q,
                                int points_per_arc = 48);
LimitSetSample split_limit_set(const Representation& rep, int points_per_arc = 48);

}  // namespace ads

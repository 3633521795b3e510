#include "doctest.h"

#include "adsanosov/hull.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace ads;

namespace {
std::vector<Vec> random_points(std::mt19937_64& rng, int d, int N, bool sphere) {
  std::normal_distribution<double> G;
  std::vector<Vec> P;
  for (int i = 0; i < N; ++i) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v(j) = G(rng);
    if (sphere) v.normalize();
    P.push_back(v);
  }
  return P;
}

bool same_planes(std::vector<std::pair<Vec, double>> a, std::vector<std::pair<Vec, double>> b) {
  if (a.size() != b.size()) return false;
  for (const auto& [n, o] : a) {
    bool found = false;
    for (const auto& [m, p] : b)
      if ((n - m).cwiseAbs().maxCoeff() < 1e-7 && std::abs(o - p) < 1e-7) found = true;
    if (!found) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("hull matches exhaustive enumeration") {
  std::mt19937_64 rng(77);
  for (int d : {2, 3, 4})
    for (int rep = 0; rep < 6; ++rep) {
      const int N = 12 + 5 * rep;
      const auto P = random_points(rng, d, std::min(N, 40), rep % 2 == 0);
      const Hull h = convex_hull_points(P);
      CHECK_FALSE(h.degenerate);
      for (const auto& p : P) CHECK(h.contains(p, 1e-9));
      for (const auto& f : h.facets) CHECK(static_cast<int>(f.verts.size()) == d);
      CHECK(same_planes(distinct_planes(h), brute_force_facet_planes(P)));
    }
}

TEST_CASE("hull of many points on the sphere uses every point") {
  std::mt19937_64 rng(5);
  const auto P = random_points(rng, 3, 2000, true);
  const Hull h = convex_hull_points(P);
  CHECK(h.vertices.size() == P.size());
  double worst = -1e300;
  for (const auto& p : P) worst = std::max(worst, h.max_violation(p));
  CHECK(worst < 1e-9);
  // Euler: simplicial 2-sphere with V vertices has 2V - 4 triangles
  CHECK(h.facets.size() == 2 * P.size() - 4);
}

TEST_CASE("flat inputs are flagged degenerate") {
  std::vector<Vec> quad;
  for (double a : {0.1, 1.7, 3.0, 4.4}) {
    Vec v(3);
    v << std::cos(a), std::sin(a), 0.0;
    quad.push_back(v);
  }
  const Hull h = convex_hull_points(quad);
  CHECK(h.degenerate);
  CHECK(h.affine_dim == 2);
  CHECK(h.facets.size() == 4);
  CHECK(h.vertices.size() == 4);
  Vec off(3);
  off << 0, 0, 1e-3;
  CHECK_FALSE(h.contains(off));
  CHECK(h.contains(Vec::Zero(3)));
}

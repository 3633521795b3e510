#include "doctest.h"

#include "adsanosov/gallery.hpp"
#include "adsanosov/lie.hpp"
#include "adsanosov/reps.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace ads;

namespace {
double maxabs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

Mat rot(int d, int i, int j, double a) {
  Mat m = Mat::Identity(d, d);
  m(i, i) = m(j, j) = std::cos(a);
  m(i, j) = -std::sin(a);
  m(j, i) = std::sin(a);
  return m;
}

// random element of the maximal compact SO(2) x SO(n)
Mat random_k(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-std::numbers::pi, std::numbers::pi);
  Mat k = rot(n + 2, 0, 1, U(rng));
  for (int i = 2; i < n + 2; ++i)
    for (int j = i + 1; j < n + 2; ++j) k = k * rot(n + 2, i, j, U(rng));
  return k;
}

double ray_dist(const Vec& a, const Vec& b) {
  return std::min((a.normalized() - b.normalized()).norm(), (a.normalized() + b.normalized()).norm());
}

Vec top_eigenvector(const Mat& g) {
  Eigen::EigenSolver<Mat> es(g);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  return es.eigenvectors().col(best).real().normalized();
}
}  // namespace

TEST_CASE("membership") {
  CHECK_NOTHROW(membership_check(Mat::Identity(4, 4)));
  Mat rotpi = Mat::Identity(4, 4);
  rotpi(0, 0) = rotpi(1, 1) = -1.0;
  rotpi(2, 2) = rotpi(3, 3) = -1.0;
  CHECK_NOTHROW(membership_check(rotpi));  // rotation by pi in both planes
  Mat wrong = Mat::Identity(4, 4);
  wrong(0, 0) = -1.0;
  wrong(2, 2) = -1.0;
  try {
    membership_check(wrong);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("wrong-component") != std::string::npos);
  }
  Mat det = Mat::Identity(4, 4);
  det(3, 3) = -1.0;
  CHECK_THROWS_WITH(membership_check(det), doctest::Contains("wrong-determinant"));
  Mat shear = Mat::Identity(4, 4);
  shear(0, 2) = 0.1;
  CHECK_THROWS_WITH(membership_check(shear), doctest::Contains("not-orthogonal"));

  std::mt19937_64 rng(1);
  const Mat g = random_k(rng, 3) * cartan_a(3, 2.5, 1.0) * random_k(rng, 3);
  const Mat J = gram(3);
  CHECK(maxabs(g.transpose() * J * g - J) < 1e-10 * g.squaredNorm());
  CHECK_NOTHROW(membership_check(g));
}

TEST_CASE("cartan decomposition basics") {
  auto id = cartan_decompose(Mat::Identity(4, 4));
  CHECK(id.lambda == doctest::Approx(0.0));
  CHECK(id.mu == doctest::Approx(0.0));
  auto a = cartan_decompose(cartan_a(2, 2.0, 1.0));
  CHECK(a.lambda == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.mu == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(maxabs(a.reconstruct() - cartan_a(2, 2.0, 1.0)) < 1e-12);

  // unit boost inside SO(1,2): singular values in a Euclidean-orthonormal basis are e, 1, 1, 1/e
  Mat b3 = Mat::Identity(3, 3);
  b3(0, 0) = b3(1, 1) = std::cosh(1.0);
  b3(0, 1) = b3(1, 0) = std::sinh(1.0);
  const Mat B = fuchsian_embed_matrix(b3);
  Eigen::JacobiSVD<Mat> sv(B);
  const double lam_oracle = std::log(sv.singularValues()(0));
  const auto ct = cartan_decompose(B);
  CHECK(ct.lambda == doctest::Approx(lam_oracle).epsilon(1e-12));
  CHECK(ct.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ct.mu) < 1e-8);
}

TEST_CASE("cartan reconstruction on random products") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int n : {2, 3})
    for (int t = 0; t < 100; ++t) {
      const double lam = 8.0 * U(rng);
      const double mu = lam * U(rng);
      const Mat g = random_k(rng, n) * cartan_a(n, lam, mu) * random_k(rng, n);
      const auto ct = cartan_decompose(g);
      CHECK(std::abs(ct.lambda - lam) < 1e-8);
      CHECK(std::abs(ct.mu - mu) < 1e-8);
      CHECK(ct.mu >= 0.0);
      CHECK(ct.mu <= ct.lambda);
      CHECK(maxabs(ct.reconstruct() - g) < 1e-8);
      // K-invariance of (lambda, mu)
      const auto c2 = cartan_decompose(random_k(rng, n) * g * random_k(rng, n));
      CHECK(std::abs(c2.lambda - lam) < 1e-8);
      CHECK(std::abs(c2.mu - mu) < 1e-8);
      // compact parts fix the negative 2-plane
      CHECK(maxabs(ct.k.topRightCorner(2, n)) < 1e-10);
      CHECK(maxabs(ct.l.topRightCorner(2, n)) < 1e-10);
    }
}

TEST_CASE("embedded SO(1,n) elements have mu = 0 and lambda = hyperbolic displacement") {
  const auto rep = fuchsian_genus2();
  const auto ball = word_ball(rep, 3);
  for (const auto& w : ball) {
    const auto ct = cartan_decompose(w.m);
    CHECK(std::abs(ct.mu) < 1e-8);
    const Mat b = rep.evaluate_base(w.word);
    const double d = std::acosh(std::max(1.0, b(0, 0)));  // d(o, g o)
    CHECK(ct.lambda == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("sequence classification and poles") {
  std::vector<Mat> bal, unb;
  for (int k = 1; k <= 20; ++k) {
    bal.push_back(cartan_a(2, k, k));
    unb.push_back(cartan_a(2, k, 0.5 * k));
  }
  const auto sb = classify_sequence(bal);
  CHECK(sb.kind == Distortion::balanced);
  CHECK(sb.nu_hat == doctest::Approx(1.0));
  const auto su = classify_sequence(unb);
  CHECK(su.kind == Distortion::unbalanced);
  CHECK(su.nu_hat < 1e-4);
  const auto pd = std::get<PoleData>(poles_and_photons(su));
  // a1 ray and b1 ray in paired coordinates
  Vec pa = Vec::Zero(4), pb = Vec::Zero(4);
  pa(0) = 1.0;
  pb(2) = 1.0;
  CHECK(ray_dist(pd.x_plus.lift, paired_to_standard(pa)) < 1e-12);
  CHECK(ray_dist(pd.x_minus.lift, paired_to_standard(pb)) < 1e-12);
  CHECK(q_inner(pd.x_plus.lift, pd.x_minus.lift) <= 1e-8);

  std::mt19937_64 rng(7);
  const Mat h = random_k(rng, 2) * cartan_a(2, 0.7, 0.2) * random_k(rng, 2);
  const Mat hi = group_inverse(h);
  std::vector<Mat> conj;
  // pole convergence is e^{mu - lambda}; go far enough for 1e-6
  for (int k = 1; k <= 40; ++k) conj.push_back(h * cartan_a(2, k, 0.5 * k) * hi);
  const auto pc = std::get<PoleData>(poles_and_photons(classify_sequence(conj)));
  CHECK(ray_dist(pc.x_plus.lift, h * pd.x_plus.lift) < 1e-6);
  CHECK(ray_dist(pc.x_minus.lift, h * pd.x_minus.lift) < 1e-6);

  const auto ph = std::get<PhotonData>(poles_and_photons(sb));
  const Mat J = gram(2);
  CHECK(maxabs(ph.delta_plus.transpose() * J * ph.delta_plus) < 1e-12);

  std::vector<Mat> flat{cartan_a(2, 0.1, 0), cartan_a(2, 0.2, 0), cartan_a(2, 0.3, 0)};
  CHECK_THROWS_WITH(classify_sequence(flat), doctest::Contains("not escaping"));
}

TEST_CASE("powers of a quasi-Fuchsian element are unbalanced with poles at its fixed points") {
  const auto rep = product_deformed();
  const Mat g = rep.evaluate("ab");
  std::vector<Mat> pw;
  Mat p = Mat::Identity(4, 4);
  // entries stay below ~1e8 so the second singular value is resolved
  for (int k = 1; k <= 5; ++k) {
    p = p * g;
    pw.push_back(p);
  }
  const auto sc = classify_sequence(pw);
  CHECK(sc.kind == Distortion::unbalanced);
  const auto pd = std::get<PoleData>(poles_and_photons(sc));
  CHECK(ray_dist(pd.x_plus.lift, top_eigenvector(g)) < 1e-6);
  CHECK(ray_dist(pd.x_minus.lift, top_eigenvector(group_inverse(g))) < 1e-6);
}

TEST_CASE("lipschitz bound of the contracting action") {
  CHECK(lipschitz_bound(Mat::Identity(4, 4), 0.3).eta == doctest::Approx(1.0));
  const double e5 = lipschitz_bound(cartan_a(2, 5.0, 0.0), 0.3).eta;
  const double e10 = lipschitz_bound(cartan_a(2, 10.0, 0.0), 0.3).eta;
  CHECK(e5 < 1.0);
  CHECK(e10 < e5);
  std::mt19937_64 rng(3);
  const Mat g = random_k(rng, 2) * cartan_a(2, 5.0, 1.0) * random_k(rng, 2);
  const Mat k = random_k(rng, 2);
  CHECK(lipschitz_bound(g, 0.3).eta == doctest::Approx(lipschitz_bound(k * g * k.transpose(), 0.3).eta).epsilon(1e-8));
  CHECK_THROWS_AS(lipschitz_bound(g, 2.0), Error);
}

TEST_CASE("inverse expansion at the attracting pole") {
  const Vec xp = x0_plus(2);
  CHECK(inverse_expansion_at(Mat::Identity(4, 4), EinPoint{xp}) == doctest::Approx(1.0));
  for (double lam : {0.5, 2.0, 6.0})
    CHECK(inverse_expansion_at(cartan_a(2, lam, 0.0), EinPoint{xp}) == doctest::Approx(std::exp(lam)).epsilon(1e-10));
}

TEST_CASE("balanced distortion scan") {
  std::vector<Mat> ctrl;
  for (int k = 1; k <= 60; ++k) ctrl.push_back(cartan_a(2, k, k));
  CHECK_FALSE(balanced_distortion_scan(ctrl).no_balanced_tail);

  const auto rep = fuchsian_genus2();
  const auto ball = word_ball(rep, 4);
  std::vector<Mat> ms;
  for (const auto& w : ball) ms.push_back(w.m);
  const auto sc = balanced_distortion_scan(ms);
  CHECK(sc.no_balanced_tail);
  CHECK(sc.mu_max < 1e-8);
}

TEST_CASE("attracting fixed point") {
  const auto fp = attracting_fixed_point(cartan_a(2, 3.0, 1.0));
  REQUIRE(fp.has_value());
  CHECK(ray_dist(*fp, x0_plus(2)) < 1e-12);
  CHECK_FALSE(attracting_fixed_point(Mat::Identity(4, 4)).has_value());
}

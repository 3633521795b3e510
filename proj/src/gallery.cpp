#include "adsanosov/gallery.hpp"

#include <cmath>
#include <numbers>

namespace ads {

Mat sl2_rotation(double angle) {
  Mat R(2, 2);
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  R << c, -s, s, c;
  return R;
}

Mat sl2_boost(double t) {
  Mat T = Mat::Zero(2, 2);
  T(0, 0) = std::exp(0.5 * t);
  T(1, 1) = std::exp(-0.5 * t);
  return T;
}

double octagon_inradius() { return std::acosh(1.0 + std::sqrt(2.0)); }

std::vector<Mat> genus2_sl2() {
  const double L = 2.0 * octagon_inradius();
  auto phi = [](int i) { return i * std::numbers::pi / 4.0; };
  // maps side i onto side j
  auto g = [&](int i, int j) { return Mat(sl2_rotation(phi(j)) * sl2_boost(L) * sl2_rotation(std::numbers::pi - phi(i))); };
  return {g(2, 0), g(1, 3), g(6, 4), g(5, 7)};
}

std::vector<Mat> twist_genus2(const std::vector<Mat>& gens, double t) {
  const Mat& a = gens[0];
  const Mat& b = gens[1];
  const Mat c = a * b * a.inverse() * b.inverse();
  Eigen::EigenSolver<Mat> es(c);
  const auto ev = es.eigenvalues();
  if (std::abs(ev(0).imag()) > 1e-12) throw Error(ErrorKind::bad_input, "commutator is not hyperbolic");
  Mat P = es.eigenvectors().real();
  if (std::abs(ev(1).real()) > std::abs(ev(0).real())) P.col(0).swap(P.col(1));
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = std::exp(0.5 * t);
  D(1, 1) = std::exp(-0.5 * t);
  const Mat z = P * D * P.inverse();
  const Mat zi = z.inverse();
  return {gens[0], gens[1], z * gens[2] * zi, z * gens[3] * zi};
}

namespace {
const std::vector<std::string> kLabels{"a", "b", "c", "d"};
const std::vector<std::string> kRelators{"abABcdCD"};
}  // namespace

Representation fuchsian_genus2() {
  const auto g = genus2_sl2();
  std::vector<Mat> so;
  for (const auto& m : g) so.push_back(sl2_to_so12(m));
  Representation rep = fuchsian_embed(so, kLabels, kRelators);
  rep.product = ProductData{g, g};
  return rep;
}

Representation product_deformed(double twist) {
  const auto g = genus2_sl2();
  return product_embed(g, twist_genus2(g, twist), kLabels, kRelators);
}

Representation small_deformation(double twist) {
  Representation rep = product_deformed(twist);
  rep.kind = BaseKind::deformed;
  return rep;
}

Representation torus_universe(double a, double b) { return nonacausal_example(2, 1, 1, a, b).rep; }

Representation schottky_n3() {
  auto boost01 = [](double t) {
    Mat m = Mat::Identity(4, 4);
    m(0, 0) = m(1, 1) = std::cosh(t);
    m(0, 1) = m(1, 0) = std::sinh(t);
    return m;
  };
  Mat rot = Mat::Identity(4, 4);
  // x axis -> (y + z)/sqrt 2
  const double r = 1.0 / std::sqrt(2.0);
  rot.block(1, 1, 3, 3) << 0, 1, 0, r, 0, r, r, 0, -r;
  std::vector<Mat> so{boost01(3.0), Mat(rot * boost01(3.5) * rot.transpose())};
  Representation rep = fuchsian_embed(so, {"a", "b"});
  rep.kind = BaseKind::custom;
  return rep;
}

std::vector<std::string> gallery_names() { return {"fuchsian-genus2", "product-deformed", "torus-universe"}; }

Representation gallery_example(const std::string& name) {
  if (name == "fuchsian-genus2") return fuchsian_genus2();
  if (name == "product-deformed") return product_deformed();
  if (name == "torus-universe") return torus_universe();
  if (name == "small-deformation") return small_deformation();
  throw Error(ErrorKind::bad_input, "unknown gallery example '" + name + "'");
}

}  // namespace ads

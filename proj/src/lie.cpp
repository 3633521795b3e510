#include "adsanosov/lie.hpp"

#include "adsanosov/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ads {

namespace {

Mat polar_orthogonal(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat r = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  r.topLeftCorner(a.rows(), a.cols()) = a;
  r.bottomRightCorner(b.rows(), b.cols()) = b;
  return r;
}

double ray_distance(const Vec& a, const Vec& b) {
  const Vec an = a.normalized(), bn = b.normalized();
  return std::min(sphere_distance(an, bn), sphere_distance(an, -bn));
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t n = x.size();
  if (n < 2) return f;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

// Euclidean-orthonormal basis of the complement of the given columns.
Mat complement_basis(const Mat& cols) {
  const auto m = cols.rows();
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeFullU);
  const auto r = cols.cols();
  return svd.matrixU().rightCols(m - r);
}

// Differential of y -> g y/|g y| at unit x restricted to span(B), as a matrix.
Mat sphere_differential(const Mat& g, const Vec& x, const Mat& B) {
  const Vec gx = g * x;
  const double ngx = gx.norm();
  const Vec yh = gx / ngx;
  Mat D = g * B;
  D -= yh * (yh.transpose() * D);
  return D / ngx;
}

}  // namespace

GroupElement membership_check(const Mat& M, std::string word, double tol) {
  if (M.rows() != M.cols() || M.rows() < 4)
    throw Error(ErrorKind::bad_input, "matrix must be square of size n+2 >= 4");
  const int n = static_cast<int>(M.rows()) - 2;
  const Mat J = gram(n);
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double orth = (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
  if (!(orth <= tol * scale * scale))
    throw Error(ErrorKind::invariant, "not-orthogonal: |M^T J M - J| = " + std::to_string(orth));
  const double det = M.determinant();
  if (!(std::abs(det - 1.0) <= tol * scale))
    throw Error(ErrorKind::invariant, "wrong-determinant: det = " + std::to_string(det));
  if (!(M.topLeftCorner(2, 2).determinant() > 0.0))
    throw Error(ErrorKind::invariant, "wrong-component: negative block reverses orientation");
  return GroupElement{M, std::move(word)};
}

Mat group_inverse(const Mat& M) {
  const int n = static_cast<int>(M.rows()) - 2;
  const Mat J = gram(n);
  return J * M.transpose() * J;
}

Mat cartan_a(int n, double lambda, double mu) {
  Mat a = Mat::Identity(n + 2, n + 2);
  a(0, 0) = a(n, n) = std::cosh(lambda);
  a(0, n) = a(n, 0) = std::sinh(lambda);
  a(1, 1) = a(n + 1, n + 1) = std::cosh(mu);
  a(1, n + 1) = a(n + 1, 1) = std::sinh(mu);
  return a;
}

Vec x0_plus(int n) {
  Vec p = Vec::Zero(n + 2);
  p(0) = 1.0;
  return paired_to_standard(p).normalized();
}

Vec x0_minus(int n) {
  Vec p = Vec::Zero(n + 2);
  p(2) = 1.0;
  return paired_to_standard(p).normalized();
}

Mat CartanTriple::reconstruct() const {
  const int n = static_cast<int>(k.rows()) - 2;
  return k * cartan_a(n, lambda, mu) * l;
}

CartanTriple cartan_decompose(const Mat& g) {
  const int n = static_cast<int>(g.rows()) - 2;
  if (n < 2 || g.cols() != g.rows()) throw Error(ErrorKind::bad_input, "cartan_decompose: bad size");
  const Mat g11 = g.topLeftCorner(2, 2);
  const Mat g12 = g.topRightCorner(2, n);

  Eigen::JacobiSVD<Mat> svd(g12, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::invariant, "eigen-solver failure");
  Mat U = svd.matrixU();
  Mat V = svd.matrixV();  // n x n, first two columns are the singular directions
  const Vec s = svd.singularValues();
  CartanTriple t;
  t.lambda = std::asinh(s(0));
  t.mu = std::asinh(s.size() > 1 ? s(1) : 0.0);

  if (U.determinant() < 0) {
    U.col(1) = -U.col(1);
    V.col(1) = -V.col(1);
  }
  Mat Ln(n, n);
  for (int j = 0; j < n - 2; ++j) Ln.row(j) = V.col(2 + j).transpose();
  Ln.row(n - 2) = V.col(0).transpose();
  Ln.row(n - 1) = V.col(1).transpose();
  if (n > 2 && Ln.determinant() < 0) Ln.row(0) = -Ln.row(0);

  Mat l2 = U.transpose() * g11;
  l2.row(0) /= std::cosh(t.lambda);
  l2.row(1) /= std::cosh(t.mu);
  l2 = polar_orthogonal(l2);
  t.l = block_diag(l2, Ln);

  const Mat glt = g * t.l.transpose();
  Mat kn(n, n);
  for (int j = 0; j < n - 2; ++j) kn.col(j) = glt.col(2 + j).tail(n);
  kn.col(n - 2) = glt.col(n).tail(n) / std::cosh(t.lambda);
  kn.col(n - 1) = glt.col(n + 1).tail(n) / std::cosh(t.mu);
  kn = polar_orthogonal(kn);
  t.k = block_diag(U, kn);
  return t;
}

const char* to_string(Distortion d) { return d == Distortion::balanced ? "balanced" : "unbalanced"; }

SequenceClass classify_sequence(std::span<const Mat> gs) {
  if (gs.empty()) throw Error(ErrorKind::bad_input, "empty sequence");
  SequenceClass sc;
  sc.n = static_cast<int>(gs[0].rows()) - 2;
  std::vector<CartanTriple> ct(gs.size());
  parallel_for(gs.size(), [&](std::size_t i) { ct[i] = cartan_decompose(gs[i]); });

  double running = -1.0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (ct[i].lambda > running + 1e-12) {
      running = ct[i].lambda;
      sc.subsequence.push_back(i);
    }
  }
  if (sc.subsequence.size() < 3)
    throw Error(ErrorKind::invariant, "non-monotone lambda: fewer than 3 increasing terms");
  if (running < 2.0) throw Error(ErrorKind::invariant, "not escaping: lambda stays below 2");

  std::vector<double> gap;
  for (auto i : sc.subsequence) {
    sc.lambda_trace.push_back(ct[i].lambda);
    sc.mu_trace.push_back(ct[i].mu);
    gap.push_back(ct[i].mu - ct[i].lambda);
  }
  const std::size_t m = sc.subsequence.size();
  const std::size_t tail0 = m - std::max<std::size_t>(3, m / 3);
  const std::vector<double> tl(sc.lambda_trace.begin() + tail0, sc.lambda_trace.end());
  const std::vector<double> tg(gap.begin() + tail0, gap.end());
  const auto fit = fit_line(tl, tg);
  sc.trend_slope = fit.slope;
  sc.trend_r2 = fit.r2;
  sc.nu_hat = std::clamp(std::exp(gap.back()), 0.0, 1.0);
  sc.kind = sc.nu_hat > kBalancedThreshold ? Distortion::balanced : Distortion::unbalanced;

  const auto& last = ct[sc.subsequence[m - 1]];
  const auto& prev = ct[sc.subsequence[m - 2]];
  sc.k_inf = last.k;
  sc.l_inf = last.l;
  const Vec xp = x0_plus(sc.n), xm = x0_minus(sc.n);
  sc.tail_residual_plus = ray_distance(last.k * xp, prev.k * xp);
  sc.tail_residual_minus = ray_distance(last.l.transpose() * xm, prev.l.transpose() * xm);
  return sc;
}

bool PoleData::in_basin_of_plus(const Vec& y, double tol) const {
  return std::abs(q_inner(y, x_minus.lift)) > tol;
}

bool PoleData::in_hemisphere(const Vec& y) const { return y.dot(x_plus.lift) > 0.0; }

std::optional<EinPoint> PhotonData::pi_plus(const Vec& x) const {
  const Vec p = standard_to_paired(l_inf * x);
  Vec a = Vec::Zero(x.size());
  a(0) = p(0);
  a(1) = nu * p(1);
  if (a.norm() < 1e-12) return std::nullopt;
  return EinPoint{(k_inf * paired_to_standard(a)).normalized()};
}

std::optional<EinPoint> PhotonData::pi_minus(const Vec& x) const {
  const Vec p = standard_to_paired(k_inf.transpose() * x);
  Vec b = Vec::Zero(x.size());
  b(2) = p(2);
  b(3) = nu * p(3);
  if (b.norm() < 1e-12) return std::nullopt;
  return EinPoint{(l_inf.transpose() * paired_to_standard(b)).normalized()};
}

std::variant<PoleData, PhotonData> poles_and_photons(const SequenceClass& sc) {
  const int n = sc.n;
  if (sc.kind == Distortion::unbalanced) {
    PoleData pd;
    pd.x_plus = EinPoint{(sc.k_inf * x0_plus(n)).normalized()};
    Vec xm = (sc.l_inf.transpose() * x0_minus(n)).normalized();
    if (q_inner(pd.x_plus.lift, xm) > 0) xm = -xm;
    pd.x_minus = EinPoint{xm};
    return pd;
  }
  PhotonData ph;
  ph.nu = sc.nu_hat;
  ph.k_inf = sc.k_inf;
  ph.l_inf = sc.l_inf;
  Mat Pp = Mat::Zero(n + 2, 2), Pm = Mat::Zero(n + 2, 2);
  Vec e = Vec::Zero(n + 2);
  e(0) = 1; Pp.col(0) = paired_to_standard(e); e.setZero();
  e(1) = 1; Pp.col(1) = paired_to_standard(e); e.setZero();
  e(2) = 1; Pm.col(0) = paired_to_standard(e); e.setZero();
  e(3) = 1; Pm.col(1) = paired_to_standard(e);
  ph.delta_plus = (sc.k_inf * Pp).householderQr().householderQ() * Mat::Identity(n + 2, 2);
  ph.delta_minus = (sc.l_inf.transpose() * Pm).householderQr().householderQ() * Mat::Identity(n + 2, 2);
  return ph;
}

LipschitzReport lipschitz_bound(const Mat& g, double eps) {
  if (!(eps > 0.0) || eps >= std::numbers::pi / 2)
    throw Error(ErrorKind::bad_input, "eps too large: cone C^-(eps) is empty");
  const int n = static_cast<int>(g.rows()) - 2;
  const auto ct = cartan_decompose(g);
  const Vec x0p = x0_plus(n);
  const Vec xplus = ct.k * x0p;
  Mat xcol(n + 2, 1);
  xcol.col(0) = x0p;
  const Mat T = complement_basis(xcol);  // n+1 tangent directions at x0+
  std::vector<Vec> dirs;
  for (int i = 0; i < T.cols(); ++i) {
    dirs.push_back(T.col(i));
    dirs.push_back(-T.col(i));
    for (int j = i + 1; j < T.cols(); ++j) {
      dirs.push_back((T.col(i) + T.col(j)).normalized());
      dirs.push_back((T.col(i) - T.col(j)).normalized());
    }
  }
  const int steps = 24;
  const double rad = std::numbers::pi / 2 - eps;
  LipschitzReport rep;
  for (int s = 0; s <= steps; ++s) {
    const double r = rad * s / steps;
    for (const auto& d : dirs) {
      const Vec y = std::cos(r) * x0p + std::sin(r) * d;
      const Vec x = ct.l.transpose() * y;
      Mat xc(n + 2, 1);
      xc.col(0) = x;
      const Mat B = complement_basis(xc);
      const Mat D = sphere_differential(g, x, B);
      Eigen::JacobiSVD<Mat> sv(D);
      rep.eta = std::max(rep.eta, sv.singularValues()(0));
      const Vec img = (g * x).normalized();
      rep.image_radius = std::max(rep.image_radius, ray_distance(img, xplus));
      ++rep.net_size;
      if (s == 0) break;
    }
  }
  return rep;
}

double inverse_expansion_at(const Mat& g, const EinPoint& x) {
  const int n = static_cast<int>(g.rows()) - 2;
  const Mat gi = group_inverse(g);
  if ((gi * x.lift).norm() < 1e-300) throw Error(ErrorKind::invariant, "singular projection");
  Mat span(n + 2, 2);
  span.col(0) = x.lift;
  span.col(1) = lower(x.lift).normalized();
  const Mat B = complement_basis(span);
  const Mat D = sphere_differential(gi, x.lift, B);
  Eigen::JacobiSVD<Mat> sv(D);
  return sv.singularValues()(sv.singularValues().size() - 1);
}

DistortionScan balanced_distortion_scan(std::span<const Mat> gs, std::span<const std::string> words) {
  DistortionScan sc;
  const std::size_t N = gs.size();
  if (N == 0) return sc;
  std::vector<double> lam(N), mu(N);
  parallel_for(N, [&](std::size_t i) {
    const auto ct = cartan_decompose(gs[i]);
    lam[i] = ct.lambda;
    mu[i] = ct.mu;
  });
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lam[a] < lam[b]; });
  for (auto i : order) {
    sc.lambda.push_back(lam[i]);
    sc.mu.push_back(mu[i]);
    if (!words.empty()) sc.words.push_back(words[i]);
    sc.mu_max = std::max(sc.mu_max, mu[i]);
  }
  sc.tail_size = std::min<std::size_t>(N, std::max<std::size_t>(1, std::min<std::size_t>(50, N / 5)));
  sc.tail_max_gap = -1e300;
  for (std::size_t i = N - sc.tail_size; i < N; ++i)
    sc.tail_max_gap = std::max(sc.tail_max_gap, sc.mu[i] - sc.lambda[i]);
  sc.tail_max_nu = std::exp(sc.tail_max_gap);

  // upper envelope of mu - lambda over the upper half of the lambda range
  const double lo = sc.lambda[N / 2], hi = sc.lambda[N - 1];
  const int bins = 10;
  std::vector<double> bx, by;
  if (hi > lo) {
    std::vector<double> top(bins, -1e300), at(bins, 0.0);
    for (std::size_t i = N / 2; i < N; ++i) {
      const int b = std::min(bins - 1, static_cast<int>((sc.lambda[i] - lo) / (hi - lo) * bins));
      const double gval = sc.mu[i] - sc.lambda[i];
      if (gval > top[b]) { top[b] = gval; at[b] = sc.lambda[i]; }
    }
    for (int b = 0; b < bins; ++b)
      if (top[b] > -1e299) { bx.push_back(at[b]); by.push_back(top[b]); }
  }
  sc.envelope_slope = fit_line(bx, by).slope;
  sc.no_balanced_tail = sc.tail_max_nu <= kBalancedThreshold || sc.envelope_slope < -0.05;
  return sc;
}

Spectrum log_eigen_moduli(const Mat& g) {
  Eigen::EigenSolver<Mat> es(g, false);
  Spectrum s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    s.log_moduli.push_back(std::log(std::abs(es.eigenvalues()(i))));
  std::sort(s.log_moduli.begin(), s.log_moduli.end(), std::greater<>());
  return s;
}

std::optional<Vec> attracting_fixed_point(const Mat& g, double gap_tol) {
  Mat G = g / g.norm();
  for (int i = 0; i < 8; ++i) {
    G = G * G;
    G /= G.norm();
  }
  Eigen::JacobiSVD<Mat> svd(G, Eigen::ComputeFullU);
  const Vec sv = svd.singularValues();
  if (!(sv(1) < gap_tol * sv(0))) return std::nullopt;
  Vec x = svd.matrixU().col(0);
  // one power step on g itself sharpens the direction
  x = (g * x).normalized();
  if (std::abs(q_norm2(x)) > 1e-8) return std::nullopt;
  return x;
}

}  // namespace ads

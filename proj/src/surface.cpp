#include "adsanosov/surface.hpp"

#include "adsanosov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ads {

Vec SurfaceMesh::embed(const Vec2& yy, double psi_value) const {
  Vec P(4);
  P << 1.0, sign * psi_value, yy(0), yy(1);
  const double s = -q_norm2(P);
  if (!(s > 0.0)) throw Error(ErrorKind::bad_input, "chart point outside AdS");
  return P / std::sqrt(s);
}

namespace {

// Natural cubic B-spline coefficients along one line: c_0 = f_0, c_{N-1} = f_{N-1}.
void spline_line(std::vector<double>& f, std::size_t off, std::size_t stride, int N) {
  if (N < 3) return;
  const int m = N - 2;
  std::vector<double> cp(m), dp(m);
  for (int k = 0; k < m; ++k) {
    double rhs = 6.0 * f[off + stride * (k + 1)];
    if (k == 0) rhs -= f[off];
    if (k == m - 1) rhs -= f[off + stride * (N - 1)];
    const double denom = 4.0 - (k > 0 ? cp[k - 1] : 0.0);
    cp[k] = 1.0 / denom;
    dp[k] = (rhs - (k > 0 ? dp[k - 1] : 0.0)) / denom;
  }
  for (int k = m - 1; k >= 0; --k) {
    const double next = k + 1 < m ? f[off + stride * (k + 2)] : 0.0;
    f[off + stride * (k + 1)] = dp[k] - (k + 1 < m ? cp[k] * next : 0.0);
  }
}

void refresh_spline(SurfaceMesh& m) {
  m.coef = m.psi_nu;
  for (int j = 0; j < m.N; ++j) spline_line(m.coef, m.index(0, j), 1, m.N);
  for (int i = 0; i < m.N; ++i) spline_line(m.coef, m.index(i, 0), static_cast<std::size_t>(m.N), m.N);
}

void init_mesh(SurfaceMesh& m, int N, double hw, int sign) {
  if (N < 5) throw Error(ErrorKind::bad_input, "mesh needs at least 5 points per side");
  if (!(hw > 0.0) || hw >= 1.0 / std::sqrt(2.0)) throw Error(ErrorKind::bad_input, "patch half width out of range");
  m.N = N;
  m.half_width = hw;
  m.h = 2.0 * hw / (N - 1);
  m.sign = sign;
  m.psi.assign(static_cast<std::size_t>(N) * N, 0.0);
}

void finish_mesh(SurfaceMesh& m) {
  m.psi_nu = m.psi;
  m.nu = 0.0;
  m.band = 2;
  m.K.clear();
  refresh_spline(m);
}

double seg_length(const Vec& a, const Vec& b) {
  const double s = q_norm2(a - b);
  if (!(s >= 0.0)) throw Error(ErrorKind::invariant, "causal chord between surface points");
  return 2.0 * std::asinh(0.5 * std::sqrt(s));
}

Vec surface_point(const SurfaceMesh& m, const Vec2& y) { return m.embed(y, psi_at(m, y)); }

}  // namespace

SurfaceMesh mesh_from_body(const ConvexBody& body, bool future, int N, double half_width) {
  if (body.n != 2) throw Error(ErrorKind::bad_input, "surfaces need n = 2");
  SurfaceMesh m;
  init_mesh(m, N, half_width, future ? -1 : 1);
  std::vector<char> ok(m.psi.size(), 1);
  parallel_for(m.psi.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx % N), j = static_cast<int>(idx / N);
    const Vec2 y = m.y(i, j);
    Vec A(4), B = Vec::Zero(4);
    A << 1.0, 0.0, y(0), y(1);
    B(1) = 1.0;
    const auto iv = fiber_interval(body, A, B, Vec::Zero(4));
    if (!iv) { ok[idx] = 0; return; }
    const double th = future ? iv->hi : iv->lo;
    if (std::abs(th) >= 0.5 * std::numbers::pi - 1e-6) { ok[idx] = 0; return; }
    m.psi[idx] = m.sign * std::tan(th);
  });
  if (std::find(ok.begin(), ok.end(), 0) != ok.end())
    throw Error(ErrorKind::invariant, "patch leaves the hull: empty fiber");
  finish_mesh(m);
  return m;
}

SurfaceMesh mesh_from_function(const std::function<double(const Vec2&)>& psi, int sign, int N, double half_width) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::bad_input, "sign must be +1 or -1");
  SurfaceMesh m;
  init_mesh(m, N, half_width, sign);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) m.psi[m.index(i, j)] = psi(m.y(i, j));
  finish_mesh(m);
  return m;
}

SurfaceMesh umbilic_cap_mesh(double c, int N, double half_width) {
  return mesh_from_function([c](const Vec2& y) { return -c * std::sqrt(1.0 - y.squaredNorm()); }, -1, N,
                            half_width);
}

double grid_lipschitz(const std::vector<double>& v, int N, double h) {
  double lip = 0.0;
  const int di[4] = {1, 0, 1, 1}, dj[4] = {0, 1, 1, -1};
  for (int d = 0; d < 4; ++d) {
    const double len = h * std::hypot(di[d], dj[d]);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const int i2 = i + di[d], j2 = j + dj[d];
        if (i2 < 0 || j2 < 0 || i2 >= N || j2 >= N) continue;
        lip = std::max(lip, std::abs(v[i2 + static_cast<std::size_t>(N) * j2] - v[i + static_cast<std::size_t>(N) * j]) / len);
      }
  }
  return lip;
}

SmoothingReport smooth_convolve(SurfaceMesh& mesh, double nu) {
  const int N = mesh.N;
  if (!(nu >= 0.0)) throw Error(ErrorKind::bad_input, "nu must be nonnegative");
  if (nu >= 0.5 * mesh.half_width) throw Error(ErrorKind::bad_input, "patch too small for nu (need nu < patch size / 4)");
  const int r = static_cast<int>(std::ceil(kKernelTruncation * nu / mesh.h));
  if (r >= N - 1) throw Error(ErrorKind::bad_input, "patch too small: kernel wider than the grid");
  std::vector<double> w(2 * r + 1, 1.0);
  if (r > 0) {
    double sum = 0.0;
    for (int k = -r; k <= r; ++k) sum += w[k + r] = std::exp(-0.5 * std::pow(k * mesh.h / nu, 2));
    for (double& x : w) x /= sum;
  }
  auto reflect = [N](int k) {
    while (k < 0 || k >= N) k = k < 0 ? -k : 2 * (N - 1) - k;
    return k;
  };
  std::vector<double> tmp(mesh.psi.size()), out(mesh.psi.size());
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < N; ++i) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += w[k + r] * mesh.psi[mesh.index(reflect(i + k), j)];
      tmp[mesh.index(i, j)] = s;
    }
  });
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < N; ++j) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += w[k + r] * tmp[mesh.index(i, reflect(j + k))];
      out[mesh.index(i, j)] = s;
    }
  });
  mesh.psi_nu = std::move(out);
  mesh.nu = nu;
  mesh.band = r + 2;
  mesh.K.clear();
  refresh_spline(mesh);

  SmoothingReport rep;
  rep.nu = nu;
  rep.min_hessian = std::numeric_limits<double>::infinity();
  const double h2 = mesh.h * mesh.h;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const std::size_t id = mesh.index(i, j);
      const double dev = std::abs(mesh.psi_nu[id] - mesh.psi[id]);
      rep.max_deviation = std::max(rep.max_deviation, dev);
      if (!mesh.interior(i, j)) continue;
      rep.max_deviation_interior = std::max(rep.max_deviation_interior, dev);
      const auto& f = mesh.psi_nu;
      const double c = 2.0 * f[id];
      const double d1 = (f[mesh.index(i + 1, j)] - c + f[mesh.index(i - 1, j)]) / h2;
      const double d2 = (f[mesh.index(i, j + 1)] - c + f[mesh.index(i, j - 1)]) / h2;
      const double d3 = (f[mesh.index(i + 1, j + 1)] - c + f[mesh.index(i - 1, j - 1)]) / (2.0 * h2);
      const double d4 = (f[mesh.index(i + 1, j - 1)] - c + f[mesh.index(i - 1, j + 1)]) / (2.0 * h2);
      rep.min_hessian = std::min({rep.min_hessian, d1, d2, d3, d4});
    }
  rep.lipschitz_before = grid_lipschitz(mesh.psi, N, mesh.h);
  rep.lipschitz_after = grid_lipschitz(mesh.psi_nu, N, mesh.h);
  rep.convex = rep.min_hessian >= -1e-8;
  return rep;
}

CurvatureReport curvature_estimate(SurfaceMesh& mesh) {
  const int N = mesh.N;
  const double h = mesh.h;
  std::vector<Vec> X(mesh.psi_nu.size());
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) X[mesh.index(i, j)] = mesh.point(i, j);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  mesh.I.assign(X.size(), Mat2::Zero());
  mesh.II.assign(X.size(), Mat2::Zero());
  mesh.K.assign(X.size(), nan);
  mesh.slope.assign(X.size(), nan);
  std::vector<char> bad(X.size(), 0);

  auto conformal = [](const Vec& u, double& th, Eigen::Vector3d& Y) {
    const double r = std::hypot(u(0), u(1));
    th = std::atan2(u(1), u(0));
    Y << 1.0, u(2) / r, u(3) / r;
    Y.normalize();
  };
  parallel_for(X.size(), [&](std::size_t id) {
    const int i = static_cast<int>(id % N), j = static_cast<int>(id / N);
    if (!mesh.interior(i, j)) return;
    auto at = [&](int a, int b) -> const Vec& { return X[mesh.index(a, b)]; };
    const Vec& x = at(i, j);
    // fourth-order central stencils
    const int off[4] = {-2, -1, 1, 2};
    const double c1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
    const double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    Vec X1 = Vec::Zero(4), X2 = Vec::Zero(4), X11 = Vec::Zero(4), X22 = Vec::Zero(4), X12 = Vec::Zero(4);
    for (int a = 0; a < 4; ++a) {
      X1 += c1[a] * at(i + off[a], j) / h;
      X2 += c1[a] * at(i, j + off[a]) / h;
      for (int b = 0; b < 4; ++b) X12 += c1[a] * c1[b] * at(i + off[a], j + off[b]) / (h * h);
    }
    for (int a = -2; a <= 2; ++a) {
      X11 += c2[a + 2] * at(i + a, j) / (h * h);
      X22 += c2[a + 2] * at(i, j + a) / (h * h);
    }
    Mat A(3, 4);
    A.row(0) = lower(x).transpose();
    A.row(1) = lower(X1).transpose();
    A.row(2) = lower(X2).transpose();
    const Eigen::FullPivLU<Mat> lu(A);
    if (lu.rank() != 3) { bad[id] = 1; return; }
    Vec nrm = lu.kernel().col(0);
    const double qn = q_norm2(nrm);
    if (!(qn < 0.0)) { bad[id] = 1; return; }
    nrm /= std::sqrt(-qn);
    Mat2 I, II;
    I << q_inner(X1, X1), q_inner(X1, X2), q_inner(X1, X2), q_inner(X2, X2);
    II << q_inner(X11, nrm), q_inner(X12, nrm), q_inner(X12, nrm), q_inner(X22, nrm);
    const double dI = I.determinant();
    if (!(dI > 0.0) || !(I(0, 0) > 0.0)) { bad[id] = 1; return; }
    mesh.I[id] = I;
    mesh.II[id] = II;
    mesh.K[id] = -1.0 - II.determinant() / dI;

    double t0, t1, t2, t3;
    Eigen::Vector3d Y0, Y1, Y2, Y3;
    conformal(at(i + 1, j), t0, Y0);
    conformal(at(i - 1, j), t1, Y1);
    conformal(at(i, j + 1), t2, Y2);
    conformal(at(i, j - 1), t3, Y3);
    Eigen::Matrix<double, 3, 2> DY;
    DY.col(0) = (Y0 - Y1) / (2.0 * h);
    DY.col(1) = (Y2 - Y3) / (2.0 * h);
    const Vec2 dth((t0 - t1) / (2.0 * h), (t2 - t3) / (2.0 * h));
    const Mat2 G = DY.transpose() * DY;
    mesh.slope[id] = std::sqrt(std::max(0.0, dth.dot(G.ldlt().solve(dth))));
  });
  if (std::find(bad.begin(), bad.end(), 1) != bad.end())
    throw Error(ErrorKind::invariant, "degenerate cell: induced metric not positive definite");

  CurvatureReport rep;
  rep.K_min = std::numeric_limits<double>::infinity();
  rep.K_max = -rep.K_min;
  for (std::size_t id = 0; id < X.size(); ++id) {
    if (std::isnan(mesh.K[id])) continue;
    ++rep.cells;
    rep.K_min = std::min(rep.K_min, mesh.K[id]);
    rep.K_max = std::max(rep.K_max, mesh.K[id]);
    rep.max_slope = std::max(rep.max_slope, mesh.slope[id]);
    if (mesh.K[id] > -1.0 + 1e-9) ++rep.above_minus_one;
  }
  if (rep.cells == 0) throw Error(ErrorKind::bad_input, "no interior cells");
  if (rep.max_slope >= 1.0 - kSpacelikeSlopeTol)
    throw Error(ErrorKind::invariant, "surface not spacelike: conformal slope reaches 1");
  return rep;
}

double psi_at(const SurfaceMesh& m, const Vec2& y) {
  const int N = m.N;
  auto basis = [N](double u, int& k, double w[4]) {
    k = std::clamp(static_cast<int>(std::floor(u)), 0, N - 2);
    const double t = u - k, s = 1.0 - t;
    w[0] = s * s * s / 6.0;
    w[1] = (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
    w[2] = (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
    w[3] = t * t * t / 6.0;
  };
  // ghost coefficients by linear extension
  auto c = [&](int i, int j) {
    auto lin = [&](int a, int b) {
      const int ia = std::clamp(a, 0, N - 1), ib = std::clamp(b, 0, N - 1);
      return m.coef[m.index(ia, ib)];
    };
    double v = lin(i, j);
    if (i < 0) v = 2.0 * lin(0, j) - lin(1, j);
    if (i > N - 1) v = 2.0 * lin(N - 1, j) - lin(N - 2, j);
    if (j < 0 || j > N - 1) {
      const int j0 = j < 0 ? 0 : N - 1, j1 = j < 0 ? 1 : N - 2;
      auto row = [&](int jj) {
        if (i < 0) return 2.0 * lin(0, jj) - lin(1, jj);
        if (i > N - 1) return 2.0 * lin(N - 1, jj) - lin(N - 2, jj);
        return lin(i, jj);
      };
      v = 2.0 * row(j0) - row(j1);
    }
    return v;
  };
  int ki, kj;
  double wi[4], wj[4];
  basis((y(0) + m.half_width) / m.h, ki, wi);
  basis((y(1) + m.half_width) / m.h, kj, wj);
  double s = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) s += wi[a] * wj[b] * c(ki - 1 + a, kj - 1 + b);
  return s;
}

double SurfacePath::partial(std::size_t k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < k && i < seg.size(); ++i) s += seg[i];
  return s;
}

SurfacePath surface_geodesic(const SurfaceMesh& mesh, const Vec2& a, const Vec2& b, int M) {
  if (M < 2) throw Error(ErrorKind::bad_input, "path needs at least 2 segments");
  const double hw = mesh.half_width;
  auto inside = [hw](const Vec2& y) { return std::abs(y(0)) <= hw && std::abs(y(1)) <= hw; };
  if (!inside(a) || !inside(b)) throw Error(ErrorKind::bad_input, "path endpoints outside the patch");
  std::vector<Vec2> y(M + 1);
  for (int k = 0; k <= M; ++k) y[k] = a + (b - a) * (static_cast<double>(k) / M);
  const int nv = 2 * (M - 1);
  auto energy_seg = [&](const Vec2& u, const Vec2& v) {
    const double l = seg_length(surface_point(mesh, u), surface_point(mesh, v));
    return l * l;
  };
  auto total = [&](const std::vector<Vec2>& yy) {
    double e = 0.0;
    for (int k = 0; k < M; ++k) e += energy_seg(yy[k], yy[k + 1]);
    return e;
  };
  const double eg = 1e-6, eh = 1e-4;
  double E = total(y);
  for (int it = 0; it < 60; ++it) {
    Vec g = Vec::Zero(nv);
    Mat H = Mat::Zero(nv, nv);
    for (int k = 0; k < M; ++k) {
      // local variables: y_k (if free) and y_{k+1} (if free)
      const bool f0 = k > 0, f1 = k + 1 < M;
      Eigen::Vector4d z;
      z << y[k](0), y[k](1), y[k + 1](0), y[k + 1](1);
      auto e4 = [&](const Eigen::Vector4d& zz) { return energy_seg(zz.head<2>(), zz.tail<2>()); };
      int idx[4] = {2 * (k - 1), 2 * (k - 1) + 1, 2 * k, 2 * k + 1};
      bool free[4] = {f0, f0, f1, f1};
      const double e0 = e4(z);
      for (int p = 0; p < 4; ++p) {
        if (!free[p]) continue;
        Eigen::Vector4d zp = z, zm = z;
        zp(p) += eg;
        zm(p) -= eg;
        g(idx[p]) += (e4(zp) - e4(zm)) / (2.0 * eg);
        zp = z; zm = z;
        zp(p) += eh;
        zm(p) -= eh;
        H(idx[p], idx[p]) += (e4(zp) - 2.0 * e0 + e4(zm)) / (eh * eh);
        for (int q = p + 1; q < 4; ++q) {
          if (!free[q]) continue;
          Eigen::Vector4d z1 = z, z2 = z, z3 = z, z4 = z;
          z1(p) += eh; z1(q) += eh;
          z2(p) += eh; z2(q) -= eh;
          z3(p) -= eh; z3(q) += eh;
          z4(p) -= eh; z4(q) -= eh;
          const double hpq = (e4(z1) - e4(z2) - e4(z3) + e4(z4)) / (4.0 * eh * eh);
          H(idx[p], idx[q]) += hpq;
          H(idx[q], idx[p]) += hpq;
        }
      }
    }
    const Vec step = H.ldlt().solve(-g);
    if (!step.allFinite()) throw Error(ErrorKind::invariant, "geodesic relaxation failed");
    double t = 1.0;
    std::vector<Vec2> trial = y;
    for (int ls = 0; ls < 30; ++ls) {
      bool ok = true;
      for (int k = 1; k < M; ++k) {
        trial[k] = y[k] + t * step.segment(2 * (k - 1), 2);
        ok = ok && inside(trial[k]);
      }
      if (ok) {
        const double Et = total(trial);
        if (Et <= E + 1e-15 * E) break;
      }
      t *= 0.5;
    }
    for (int k = 1; k < M; ++k)
      if (!inside(trial[k])) throw Error(ErrorKind::invariant, "geodesic leaves the patch");
    y = trial;
    E = total(y);
    if (t * step.lpNorm<Eigen::Infinity>() < 1e-11) break;
  }
  SurfacePath path;
  path.y = y;
  path.seg.resize(M);
  for (int k = 0; k < M; ++k) {
    path.seg[k] = seg_length(surface_point(mesh, y[k]), surface_point(mesh, y[k + 1]));
    path.length += path.seg[k];
  }
  return path;
}

double comparison_distance(double a, double b, double c, double pm) {
  if (b < 1e-14 || c < 1e-14) return std::abs(b - pm);
  double ca = (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c));
  ca = std::clamp(ca, -1.0, 1.0);
  const double arg = std::cosh(pm) * std::cosh(b) - std::sinh(pm) * std::sinh(b) * ca;
  return std::acosh(std::max(1.0, arg));
}

TriangleSlack triangle_slack(const SurfaceMesh& mesh, const Vec2& p, const Vec2& q, const Vec2& r, int k_m) {
  const auto pq = surface_geodesic(mesh, p, q);
  if (k_m < 0 || k_m > static_cast<int>(pq.seg.size())) throw Error(ErrorKind::bad_input, "side vertex out of range");
  TriangleSlack t;
  t.p = p;
  t.q = q;
  t.r = r;
  t.c = pq.length;
  t.b = surface_geodesic(mesh, p, r).length;
  t.a = surface_geodesic(mesh, q, r).length;
  t.pm = pq.partial(static_cast<std::size_t>(k_m));
  t.actual = surface_geodesic(mesh, pq.y[k_m], r).length;
  t.comparison = comparison_distance(t.a, t.b, t.c, t.pm);
  t.slack = t.comparison - t.actual;
  return t;
}

TriangleSlack collinear_slack(const SurfaceMesh& mesh, const Vec2& p, const Vec2& q) {
  const auto pq = surface_geodesic(mesh, p, q);
  return triangle_slack(mesh, p, q, pq.y[kPathSegments / 2], kPathSegments / 4);
}

CatReport cat_comparison_test(const SurfaceMesh& mesh, int triangles, unsigned long long seed) {
  if (triangles <= 0) throw Error(ErrorKind::bad_input, "triangle count must be positive");
  if (mesh.K.empty()) throw Error(ErrorKind::bad_input, "curvature check must run before the comparison test");
  for (std::size_t id = 0; id < mesh.K.size(); ++id)
    if (!std::isnan(mesh.K[id]) && mesh.K[id] > -1.0 + 1e-2)
      throw Error(ErrorKind::invariant, "curvature check failed: K > -1 + 1e-2 on an interior cell");
  const double lim = mesh.half_width - (mesh.band + 1) * mesh.h;
  if (!(lim > 0.0)) throw Error(ErrorKind::bad_input, "disconnected patch: no interior region");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-lim, lim);
  std::uniform_int_distribution<int> Km(kPathSegments / 4, 3 * kPathSegments / 4);
  struct Job {
    Vec2 p, q, r;
    int k;
  };
  std::vector<Job> jobs(triangles);
  for (auto& j : jobs) {
    j.p = Vec2(U(rng), U(rng));
    j.q = Vec2(U(rng), U(rng));
    j.r = Vec2(U(rng), U(rng));
    j.k = Km(rng);
  }
  CatReport rep;
  rep.triangles.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    rep.triangles[i] = triangle_slack(mesh, jobs[i].p, jobs[i].q, jobs[i].r, jobs[i].k);
  });
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& t : rep.triangles) rep.min_slack = std::min(rep.min_slack, t.slack);
  rep.pass = rep.min_slack >= -kCatSlackTol;
  return rep;
}

double length_refinement_ratio(const SurfaceMesh& coarse, const SurfaceMesh& fine) {
  if (fine.N != 2 * coarse.N - 1 || std::abs(fine.half_width - coarse.half_width) > 1e-15)
    throw Error(ErrorKind::bad_input, "fine mesh must refine the coarse mesh once");
  double worst = 0.0;
  for (int j = coarse.band; j < coarse.N - coarse.band; ++j)
    for (int i = coarse.band; i + 1 < coarse.N - coarse.band; ++i)
      for (int d = 0; d < 2; ++d) {
        const int i2 = i + (d == 0), j2 = j + (d == 1);
        if (!coarse.interior(i2, j2)) continue;
        const double dc = seg_length(coarse.point(i, j), coarse.point(i2, j2));
        const int fi = 2 * i, fj = 2 * j, mi = fi + (d == 0), mj = fj + (d == 1);
        const double df = seg_length(fine.point(fi, fj), fine.point(mi, mj)) +
                          seg_length(fine.point(mi, mj), fine.point(2 * i2, 2 * j2));
        worst = std::max(worst, std::abs(df / dc - 1.0));
      }
  return worst;
}

}  // namespace ads

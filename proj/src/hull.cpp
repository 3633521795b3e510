#include "adsanosov/hull.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

namespace ads {

namespace {

using LD = long double;
using VecL = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
using MatL = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;

struct Work {
  std::vector<int> v;
  std::vector<int> nb;
  VecL n;
  LD off = 0.0;
  bool alive = true;
};

// Unit normal of the hyperplane through k points in R^k, oriented away from c.
bool plane_through(const std::vector<VecL>& P, const std::vector<int>& idx, const VecL& c, VecL& n, LD& off) {
  const int k = static_cast<int>(P[idx[0]].size());
  MatL D(k - 1, k);
  for (int i = 1; i < k; ++i) D.row(i - 1) = (P[idx[i]] - P[idx[0]]).transpose();
  Eigen::JacobiSVD<MatL> svd(D, Eigen::ComputeFullV);
  n = svd.matrixV().col(k - 1);
  const auto& s = svd.singularValues();
  if (s.size() > 0 && s(s.size() - 1) < 1e-17L * std::max<LD>(1.0L, s(0))) return false;
  off = n.dot(P[idx[0]]);
  if (n.dot(c) > off) {
    n = -n;
    off = -off;
  }
  return true;
}

std::vector<int> sorted_without(const std::vector<int>& v, std::size_t skip) {
  std::vector<int> r;
  r.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != skip) r.push_back(v[i]);
  std::sort(r.begin(), r.end());
  return r;
}

// Simplicial hull in R^k, k >= 2, of full-dimensional point set.
std::vector<Work> hull_full(const std::vector<VecL>& P, LD scale) {
  const int k = static_cast<int>(P[0].size());
  const int N = static_cast<int>(P.size());
  const LD eps = 1e-16L * scale;

  // initial simplex with greedy affine independence
  std::vector<int> simplex;
  int i0 = 0;
  for (int i = 1; i < N; ++i)
    if (P[i](0) < P[i0](0)) i0 = i;
  simplex.push_back(i0);
  while (static_cast<int>(simplex.size()) < k + 1) {
    MatL B(k, simplex.size() - 1);
    for (std::size_t j = 1; j < simplex.size(); ++j) B.col(j - 1) = P[simplex[j]] - P[simplex[0]];
    MatL Q;
    if (B.cols() > 0) {
      Eigen::HouseholderQR<MatL> qr(B);
      Q = qr.householderQ() * MatL::Identity(k, B.cols());
    }
    int best = -1;
    LD bd = -1.0;
    for (int i = 0; i < N; ++i) {
      VecL d = P[i] - P[simplex[0]];
      if (Q.cols() > 0) d -= Q * (Q.transpose() * d);
      const LD dn = d.norm();
      if (dn > bd) { bd = dn; best = i; }
    }
    if (bd <= 1e-12L * scale) throw Error(ErrorKind::invariant, "hull: could not find an initial simplex");
    simplex.push_back(best);
  }
  VecL c = VecL::Zero(k);
  for (int s : simplex) c += P[s];
  c /= static_cast<LD>(k + 1);

  std::vector<Work> F;
  for (int j = 0; j <= k; ++j) {
    Work w;
    for (int s = 0; s <= k; ++s)
      if (s != j) w.v.push_back(simplex[s]);
    if (!plane_through(P, w.v, c, w.n, w.off)) throw Error(ErrorKind::invariant, "hull: flat initial simplex");
    w.nb.assign(k, -1);
    F.push_back(std::move(w));
  }
  // facet j omits simplex[j]; its neighbor opposite vertex simplex[s] is facet s
  for (int j = 0; j <= k; ++j)
    for (int t = 0; t < k; ++t) {
      const int vert = F[j].v[t];
      const int s = static_cast<int>(std::find(simplex.begin(), simplex.end(), vert) - simplex.begin());
      F[j].nb[t] = s;
    }

  std::vector<char> used(N, 0);
  for (int s : simplex) used[s] = 1;
  // deterministic pseudo-random insertion order
  std::vector<int> order;
  for (int i = 0; i < N; ++i)
    if (!used[i]) order.push_back(i);
  std::uint64_t st = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = order.size(); i > 1; --i) {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    std::swap(order[i - 1], order[st % i]);
  }

  std::vector<int> mark(F.size(), -1);
  std::vector<int> visible, stack;
  for (int p : order) {
    int start = -1;
    LD bmax = eps;
    for (int f = 0; f < static_cast<int>(F.size()); ++f) {
      if (!F[f].alive) continue;
      const LD d = F[f].n.dot(P[p]) - F[f].off;
      if (d > bmax) { bmax = d; start = f; }
    }
    if (start < 0) continue;
    visible.clear();
    stack.assign(1, start);
    mark.resize(F.size(), -1);
    mark[start] = p;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      visible.push_back(f);
      for (int g : F[f].nb) {
        if (mark[g] == p) continue;
        if (F[g].n.dot(P[p]) - F[g].off > eps) {
          mark[g] = p;
          stack.push_back(g);
        }
      }
    }
    // horizon
    std::map<std::vector<int>, std::pair<int, int>> open;  // ridge containing p -> (facet, slot)
    const std::size_t first_new = F.size();
    for (int f : visible) {
      for (int t = 0; t < k; ++t) {
        const int h = F[f].nb[t];
        if (mark[h] == p) continue;
        Work g;
        g.v = F[f].v;
        g.v[t] = p;
        g.nb.assign(k, -1);
        g.nb[t] = h;
        if (!plane_through(P, g.v, c, g.n, g.off)) {
          // nearly coplanar; keep the parent plane (the point is within eps of it anyway)
          g.n = F[f].n;
          g.off = F[f].n.dot(P[p]);
        }
        const int gi = static_cast<int>(F.size());
        for (int u = 0; u < k; ++u)
          if (F[h].nb[u] == f) F[h].nb[u] = gi;
        F.push_back(std::move(g));
      }
    }
    mark.resize(F.size(), -1);
    for (std::size_t gi = first_new; gi < F.size(); ++gi) {
      for (int u = 0; u < k; ++u) {
        if (F[gi].v[u] == p) continue;
        auto key = sorted_without(F[gi].v, u);
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(std::move(key), std::make_pair(static_cast<int>(gi), u));
        } else {
          F[gi].nb[u] = it->second.first;
          F[it->second.first].nb[it->second.second] = static_cast<int>(gi);
          open.erase(it);
        }
      }
    }
    for (int f : visible) F[f].alive = false;
  }
  std::vector<Work> out;
  for (auto& f : F)
    if (f.alive) out.push_back(std::move(f));
  return out;
}

}  // namespace

bool Hull::contains(const Vec& x, double tol) const { return max_violation(x) <= tol; }

double Hull::max_violation(const Vec& x) const {
  double m = -1e300;
  for (const auto& f : facets) m = std::max(m, f.normal.dot(x) - f.offset);
  if (normal_space.cols() > 0) {
    const Vec r = normal_space.transpose() * (x - origin);
    m = std::max(m, r.cwiseAbs().maxCoeff());
  }
  return m;
}

Hull convex_hull_points(std::span<const Vec> pts, double degenerate_sigma) {
  if (pts.empty()) throw Error(ErrorKind::bad_input, "hull of empty set");
  const int d = static_cast<int>(pts[0].size());
  const int N = static_cast<int>(pts.size());
  Hull h;
  h.dim = d;
  h.origin = Vec::Zero(d);
  for (const auto& p : pts) h.origin += p;
  h.origin /= N;
  Mat S(N, d);
  for (int i = 0; i < N; ++i) S.row(i) = (pts[i] - h.origin).transpose();
  Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeThinV);
  const Vec sv = svd.singularValues() / std::sqrt(static_cast<double>(N));
  h.spread_sigma_min = sv.size() >= d ? sv(d - 1) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) >= degenerate_sigma) ++rank;
  h.affine_dim = rank;
  h.degenerate = rank < d;
  Mat V = svd.matrixV();
  if (V.cols() < d) {
    // complete to a full basis
    Eigen::HouseholderQR<Mat> qr(V);
    V = qr.householderQ();
  }
  h.basis = V.leftCols(rank);
  h.normal_space = V.rightCols(d - rank);

  std::vector<Vec> P(N);
  std::vector<VecL> PL(N);
  double scale = 0.0;
  for (int i = 0; i < N; ++i) {
    P[i] = h.basis.transpose() * (pts[i] - h.origin);
    PL[i] = (h.basis.cast<LD>().transpose() * (pts[i].cast<LD>() - h.origin.cast<LD>()));
    scale = std::max(scale, P[i].cwiseAbs().maxCoeff());
  }
  scale = std::max(scale, 1e-300);

  std::vector<int> verts;
  if (rank == 0) {
    verts.push_back(0);
  } else if (rank == 1) {
    int lo = 0, hi = 0;
    for (int i = 1; i < N; ++i) {
      if (P[i](0) < P[lo](0)) lo = i;
      if (P[i](0) > P[hi](0)) hi = i;
    }
    HullFacet a{{hi}, h.basis.col(0), h.basis.col(0).dot(pts[hi])};
    HullFacet b{{lo}, -h.basis.col(0), -h.basis.col(0).dot(pts[lo])};
    h.facets = {a, b};
    verts = {lo, hi};
  } else {
    const auto F = hull_full(PL, scale);
    for (const auto& f : F) {
      HullFacet hf;
      hf.verts = f.v;
      const VecL nl = h.basis.cast<LD>() * f.n;
      hf.normal = nl.cast<double>();
      hf.offset = static_cast<double>(f.off + nl.dot(h.origin.cast<LD>()));
      h.facets.push_back(std::move(hf));
      verts.insert(verts.end(), f.v.begin(), f.v.end());
    }
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  h.vertices = std::move(verts);
  return h;
}

namespace {
void push_distinct(std::vector<std::pair<Vec, double>>& out, const Vec& n, double off, double tol) {
  for (const auto& [m, o] : out)
    if ((m - n).cwiseAbs().maxCoeff() < tol && std::abs(o - off) < tol) return;
  out.emplace_back(n, off);
}
}  // namespace

std::vector<std::pair<Vec, double>> distinct_planes(const Hull& h, double tol) {
  std::vector<std::pair<Vec, double>> out;
  for (const auto& f : h.facets) push_distinct(out, f.normal, f.offset, tol);
  return out;
}

std::vector<std::pair<Vec, double>> brute_force_facet_planes(std::span<const Vec> pts, double tol) {
  const int d = static_cast<int>(pts[0].size());
  const int N = static_cast<int>(pts.size());
  std::vector<std::pair<Vec, double>> out;
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    Mat D(d - 1, d);
    for (int i = 1; i < d; ++i) D.row(i - 1) = (pts[idx[i]] - pts[idx[0]]).transpose();
    Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 1e-9) {
      Vec n = svd.matrixV().col(d - 1);
      double off = n.dot(pts[idx[0]]);
      double mx = -1e300, mn = 1e300;
      for (int i = 0; i < N; ++i) {
        const double v = n.dot(pts[i]) - off;
        mx = std::max(mx, v);
        mn = std::min(mn, v);
      }
      if (mx <= tol) push_distinct(out, n, off, 1e-7);
      else if (mn >= -tol) push_distinct(out, -n, -off, 1e-7);
    }
    int i = d - 1;
    while (i >= 0 && idx[i] == N - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace ads

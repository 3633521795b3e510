#include "adsanosov/anosov.hpp"

#include "adsanosov/lie.hpp"
#include "adsanosov/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

namespace ads {

namespace {

Vec endpoint_of(const Vec& null) { return null.tail(null.size() - 1) / null(0); }

struct Fit {
  double slope = 0.0, r2 = 0.0;
};
Fit log_fit(const std::vector<double>& t, const std::vector<double>& v) {
  const std::size_t n = t.size();
  Fit f;
  if (n < 2) return f;
  double tm = 0.0, lm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += t[i];
    lm += std::log(v[i]);
  }
  tm /= static_cast<double>(n);
  lm /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dl = std::log(v[i]) - lm;
    sxy += (t[i] - tm) * dl;
    sxx += (t[i] - tm) * (t[i] - tm);
    syy += dl * dl;
  }
  f.slope = sxy / sxx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

Vec reflected(const Vec& z) {
  Vec r = z;
  r.tail(z.size() - 2) *= -1.0;
  return r;
}

}  // namespace

FlowPoint make_flow_point(const Vec& base, const Vec& tangent) {
  const double qb = minkowski(base, base);
  if (!(qb < 0.0) || base(0) <= 0.0) throw Error(ErrorKind::bad_input, "flow base must be future timelike");
  FlowPoint p;
  p.base = base / std::sqrt(-qb);
  p.tangent = tangent + minkowski(tangent, p.base) * p.base;
  const double qt = minkowski(p.tangent, p.tangent);
  if (!(qt > 1e-24)) throw Error(ErrorKind::bad_input, "flow tangent is degenerate");
  p.tangent /= std::sqrt(qt);
  p.xi_plus = endpoint_of(p.base + p.tangent);
  p.xi_minus = endpoint_of(p.base - p.tangent);
  return p;
}

FlowPoint flow_step(const FlowPoint& p, double t) {
  FlowPoint r;
  const double ch = std::cosh(t), sh = std::sinh(t);
  r.base = ch * p.base + sh * p.tangent;
  r.tangent = sh * p.base + ch * p.tangent;
  r.base /= std::sqrt(-minkowski(r.base, r.base));
  r.tangent += minkowski(r.tangent, r.base) * r.base;
  r.tangent /= std::sqrt(minkowski(r.tangent, r.tangent));
  r.xi_plus = p.xi_plus;
  r.xi_minus = p.xi_minus;
  return r;
}

FlowPoint transform(const Mat& base_g, const FlowPoint& p) { return make_flow_point(base_g * p.base, base_g * p.tangent); }

double hyperbolic_distance(const Vec& a, const Vec& b) { return std::acosh(std::max(1.0, -minkowski(a, b))); }

FlowPoint axis_flow_point(const Mat& g) {
  Eigen::EigenSolver<Mat> es(g);
  const auto ev = es.eigenvalues();
  int top = 0, bot = 0;
  for (int i = 1; i < ev.size(); ++i) {
    if (ev(i).real() > ev(top).real()) top = i;
    if (ev(i).real() < ev(bot).real()) bot = i;
  }
  if (std::abs(ev(top).imag()) > 1e-9 || !(ev(top).real() > 1.0 + 1e-9))
    throw Error(ErrorKind::bad_input, "element is not loxodromic");
  Vec vp = es.eigenvectors().col(top).real();
  Vec vm = es.eigenvectors().col(bot).real();
  if (vp(0) < 0) vp = -vp;
  if (vm(0) < 0) vm = -vm;
  const double k = 1.0 / (-2.0 * minkowski(vp, vm));
  const double A = vp(0), B = vm(0);
  const double a = std::sqrt(k * B / A), b = std::sqrt(k * A / B);
  return make_flow_point(a * vp + b * vm, a * vp - b * vm);
}

double atom_inner(const MetricAtom& a, const Vec& u, const Vec& v) {
  return q_inner(u, v) + 2.0 * (q_inner(u, a.x) * q_inner(v, a.x) + q_inner(u, a.V) * q_inner(v, a.V));
}

Mat metric_gram(const MetricAtom& a, const Vec& z, const Mat& W) {
  // factored form; the assembled matrix of ||.||_{x,V} loses everything for large atoms
  const Vec Jx = lower(a.x), JV = lower(a.V), Jz = lower(z);
  const double zx = Jx.dot(z), zV = JV.dot(z);
  const double zz = Jz.dot(z) + 2.0 * (zx * zx + zV * zV);
  if (!(zz > 0.0)) throw Error(ErrorKind::bad_input, "point outside the chart of the atom");
  const Eigen::RowVectorXd zw = Jz.transpose() * W + 2.0 * (zx * (Jx.transpose() * W) + zV * (JV.transpose() * W));
  const Mat D = (W - z * zw / zz) / std::sqrt(zz);
  const Eigen::RowVectorXd dx = Jx.transpose() * D, dV = JV.transpose() * D;
  return D.transpose() * gram(static_cast<int>(z.size()) - 2) * D + 2.0 * (dx.transpose() * dx + dV.transpose() * dV);
}

double metric_norm(const MetricAtom& a, const Vec& z, const Vec& w) {
  Mat W(w.size(), 1);
  W.col(0) = w;
  return std::sqrt(std::max(0.0, metric_gram(a, z, W)(0, 0)));
}

MetricAtom transform(const Mat& g, const MetricAtom& a) { return MetricAtom{g * a.x, g * a.V}; }

MetricFamily default_family(int n) {
  MetricFamily f;
  f.x0 = Vec::Zero(n + 2);
  f.x0(0) = 1.0;
  f.V0 = Vec::Zero(n + 2);
  f.V0(1) = 1.0;
  f.frame = Mat::Zero(n + 2, n);
  for (int i = 0; i < n; ++i) f.frame(i + 2, i) = 1.0;
  return f;
}

MetricFamily rotated_family(int n, double s) {
  MetricFamily f = default_family(n);
  f.V0(1) = std::cosh(s);
  f.V0(2) = std::sinh(s);
  f.frame(1, 0) = std::sinh(s);
  f.frame(2, 0) = std::cosh(s);
  return f;
}

MetricAtom local_atom(const MetricFamily& fam, const Vec& y) {
  if (!fam.offset) return MetricAtom{fam.x0, fam.V0};
  const int n = static_cast<int>(y.size()) - 1;
  return MetricAtom{y(0) * fam.x0 + fam.frame * y.tail(n), fam.V0};
}

MetricAtom walker_atom(const MetricFamily& fam, const OrbitWalker& w) {
  return transform(w.rho(), local_atom(fam, w.local_point()));
}

Mat walker_gram(const MetricFamily& fam, const OrbitWalker& w, const Vec& z, const Mat& W) {
  const Mat gi = group_inverse(w.rho());
  return metric_gram(local_atom(fam, w.local_point()), gi * z, gi * W);
}

Ratio metric_ratio(const Mat& G0, const Mat& G1) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(G1, G0);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::invariant, "metric comparison failed");
  return Ratio{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

Endpoints endpoint_maps(const FlowPoint& p, const Representation& rep, const Vec& x0, int depth) {
  const auto bp = boundary_map_ray(rep, p.base, p.tangent, depth, x0);
  const auto bm = boundary_map_ray(rep, p.base, -p.tangent, depth, x0);
  return Endpoints{bp.point, bm.point, std::max(bp.residual, bm.residual)};
}

Mat tangent_basis(const Vec& z, const Vec& zo) {
  Mat A(2, z.size());
  A.row(0) = lower(z).transpose();
  A.row(1) = lower(zo).transpose();
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(z.size() - 2);
}

namespace {

// Walks the flow line on the grid; calls f(t, alpha_minus, alpha_plus) until it returns false.
template <class F>
void walk_alphas(const FlowPoint& p, const Representation& rep, const MetricFamily& fam, const Endpoints& e,
                 double T_max, F&& f) {
  const Vec& zp = e.plus.lift;
  const Vec& zm = e.minus.lift;
  const Mat Wp = tangent_basis(zp, zm), Wm = tangent_basis(zm, zp);
  OrbitWalker w(rep, p.base, p.tangent);
  const Mat Gp0 = walker_gram(fam, w, zp, Wp), Gm0 = walker_gram(fam, w, zm, Wm);
  if (!f(0.0, 1.0, 1.0)) return;
  const int steps = static_cast<int>(std::floor(T_max / kGridStep + 1e-9));
  for (int k = 1; k <= steps; ++k) {
    w.advance(kGridStep);
    const double am = metric_ratio(Gm0, walker_gram(fam, w, zm, Wm)).max;
    const double ap = metric_ratio(Gp0, walker_gram(fam, w, zp, Wp)).min;
    if (!f(k * kGridStep, am, ap)) return;
  }
}

}  // namespace

AlphaTable alpha_cocycle(const FlowPoint& p, const Representation& rep, const MetricFamily& fam, double t_max,
                         const Endpoints* ends) {
  const Endpoints e = ends ? *ends : endpoint_maps(p, rep, fam.x0);
  AlphaTable tab;
  walk_alphas(p, rep, fam, e, t_max, [&](double t, double am, double ap) {
    tab.t.push_back(t);
    tab.alpha_minus.push_back(am);
    tab.alpha_plus.push_back(ap);
    return true;
  });
  const auto fm = log_fit(tab.t, tab.alpha_minus), fp = log_fit(tab.t, tab.alpha_plus);
  tab.rate_minus = fm.slope;
  tab.r2_minus = fm.r2;
  tab.rate_plus = fp.slope;
  tab.r2_plus = fp.r2;
  return tab;
}

double doubling_time(const FlowPoint& p, const Representation& rep, const MetricFamily& fam, double C, double T_max,
                     const Endpoints* ends) {
  if (!(C >= 1.0)) throw Error(ErrorKind::bad_input, "doubling factor must be >= 1");
  if (!(T_max > 0.0 && T_max <= 200.0)) throw Error(ErrorKind::bad_input, "T_max must lie in (0, 200]");
  if (C == 1.0) return 0.0;
  const Endpoints e = ends ? *ends : endpoint_maps(p, rep, fam.x0);
  double found = std::numeric_limits<double>::infinity();
  walk_alphas(p, rep, fam, e, T_max, [&](double t, double, double ap) {
    if (ap >= C) {
      found = t;
      return false;
    }
    return true;
  });
  return found;
}

double axis_rate(const Representation& rep, const std::string& w) {
  const auto s = log_eigen_moduli(rep.evaluate(w)).log_moduli;
  const auto b = log_eigen_moduli(rep.evaluate_base(w)).log_moduli;
  double l2 = s[1];
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] < s[0] - 1e-9) {
      l2 = s[i];
      break;
    }
  return -2.0 * (s[0] - l2) / b[0];
}

double distortion_constant(const Representation& rep, const MetricFamily& fam, double delta, std::size_t samples,
                           unsigned long long seed) {
  if (!(delta > 0.0)) throw Error(ErrorKind::bad_input, "delta must be positive");
  const int n = rep.n;
  auto level = [&](double d) {
    std::mt19937_64 rng(seed ^ std::bit_cast<unsigned long long>(d));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    auto unit = [&] {
      Vec u(n);
      for (int i = 0; i < n; ++i) u(i) = N(rng);
      return Vec(u.normalized());
    };
    struct Job {
      FlowPoint a, b;
      Vec xi;
    };
    std::vector<Job> jobs;
    const auto starts = flow_samples(n, samples, 1.6, rng());
    for (const auto& a : starts) {
      const auto b = flow_step(a, d * U(rng));
      jobs.push_back({a, b, unit()});
    }
    std::vector<double> worst(jobs.size(), 1.0);
    parallel_for(jobs.size(), [&](std::size_t i) {
      const Vec z = boundary_map(rep, jobs[i].xi, 40, fam.x0).point.lift;
      const Mat W = tangent_basis(z, reflected(z));
      OrbitWalker wa(rep, jobs[i].a.base, jobs[i].a.tangent), wb(rep, jobs[i].b.base, jobs[i].b.tangent);
      const auto r = metric_ratio(walker_gram(fam, wa, z, W), walker_gram(fam, wb, z, W));
      worst[i] = std::max({1.0, std::sqrt(r.max), 1.0 / std::sqrt(r.min)});
    });
    return *std::max_element(worst.begin(), worst.end());
  };
  double C = 1.0;
  for (double d = delta; d >= 1e-4 * std::min(1.0, delta); d *= 0.5) C = std::max(C, level(d));
  return C;
}

RecurrenceReport recurrence_caps(const FlowPoint& p, const Representation& rep, const ConvexBody& body, int R,
                                 const std::string& periodic) {
  RecurrenceReport r;
  const Vec x0 = body_basepoint(body);
  Vec xp, xm;
  std::vector<std::string> words;
  if (!periodic.empty()) {
    const Mat g = rep.evaluate(periodic);
    const auto fp = attracting_fixed_point(g), fm = attracting_fixed_point(group_inverse(g));
    if (!fp || !fm) throw Error(ErrorKind::bad_input, "periodic word has no attracting pole");
    xp = *fp;
    xm = *fm;
    std::string w;
    while (static_cast<int>(w.size() + periodic.size()) <= R) {
      w += periodic;
      words.push_back(w);
    }
  } else {
    const auto e = endpoint_maps(p, rep, x0);
    xp = e.plus.lift;
    xm = e.minus.lift;
    OrbitWalker w(rep, p.base, p.tangent);
    for (int it = 0; it < 100000; ++it) {
      w.advance(kBoundaryStep);
      if (static_cast<int>(w.word().size()) > R) break;
      if (!w.word().empty() && (words.empty() || words.back() != w.word())) words.push_back(w.word());
    }
  }
  if (words.empty()) throw Error(ErrorKind::invariant, "insufficient word radius for recurrence words");
  if (q_inner(xp, xm) > 0.0) xm = -xm;
  if (!(q_inner(xp, xm) < -1e-12)) throw Error(ErrorKind::invariant, "lightlike pole pair");
  auto wall = [&](const Vec& x) {
    Vec a = xp / std::abs(q_inner(xp, x)) - xm / std::abs(q_inner(xm, x));
    if (q_inner(xp, a) < 0.0) a = -a;
    return a;
  };
  const Vec a0 = wall(x0);
  r.minus_in_dminus = q_inner(xm, a0) < 0.0;
  struct Row {
    std::string w;
    double lambda, expansion;
    Mat g;
  };
  std::vector<Row> rows;
  // periodic words: chain rule at the fixed point, D(g^{-k}) = D(g^{-1})^k on T_{x+}
  Mat step;
  if (!periodic.empty()) {
    const Vec x = xp.normalized();
    const Mat gi = group_inverse(rep.evaluate(periodic));
    Mat span(x.size(), 2);
    span.col(0) = x;
    span.col(1) = lower(x).normalized();
    Eigen::JacobiSVD<Mat> svd(span, Eigen::ComputeFullU);
    const Mat B = svd.matrixU().rightCols(x.size() - 2);
    const Vec gx = gi * x;
    const Vec yh = gx.normalized();
    Mat D = gi * B;
    D -= yh * (yh.transpose() * D);
    step = B.transpose() * D / gx.norm();
  }
  for (std::size_t k = 0; k < words.size(); ++k) {
    const Mat g = rep.evaluate(words[k]);
    double ex;
    if (!periodic.empty()) {
      Mat P = Mat::Identity(step.rows(), step.cols());
      for (std::size_t j = 0; j <= k; ++j) P = P * step;
      Eigen::JacobiSVD<Mat> sv(P);
      ex = sv.singularValues().minCoeff();
    } else {
      ex = inverse_expansion_at(g, EinPoint{xp.normalized()});
    }
    rows.push_back({words[k], cartan_decompose(g).lambda, ex, g});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.lambda < b.lambda; });
  std::vector<int> prev;
  bool first = true;
  for (const auto& row : rows) {
    r.words.push_back(row.w);
    r.lambda.push_back(row.lambda);
    r.inverse_expansion.push_back(row.expansion);
    const Vec a = wall(row.g * x0);
    r.plus_in_caps = r.plus_in_caps && q_inner(xp, a) > 0.0;
    std::vector<int> cur;
    try {
      const auto cap = convex_cap(body, a);
      r.diameters.push_back(cap.diameter_plus);
      cur = cap.plus;
    } catch (const Error&) {
      r.diameters.push_back(0.0);  // below the sample resolution
    }
    std::sort(cur.begin(), cur.end());
    if (!first) r.nested = r.nested && std::includes(prev.begin(), prev.end(), cur.begin(), cur.end());
    prev = std::move(cur);
    first = false;
  }
  for (std::size_t i = 1; i < r.inverse_expansion.size(); ++i)
    r.expansion_increasing = r.expansion_increasing && r.inverse_expansion[i] > r.inverse_expansion[i - 1];
  std::vector<double> idx, dia;
  for (std::size_t i = 0; i < r.diameters.size(); ++i)
    if (r.diameters[i] > 0.0) {
      idx.push_back(static_cast<double>(i));
      dia.push_back(r.diameters[i]);
    }
  r.diameter_rate = log_fit(idx, dia).slope;
  return r;
}

ConjugacyPoint conjugacy_map(const FlowPoint& p, const Representation& rep, const Vec& xb, const Vec& x0,
                             const Vec* o) {
  const auto e = endpoint_maps(p, rep, x0);
  ConjugacyPoint c;
  c.lplus = e.plus.lift;
  c.lminus = e.minus.lift;
  const double pm = q_inner(c.lplus, c.lminus);
  if (!(pm < -1e-12)) throw Error(ErrorKind::invariant, "lightlike endpoint pair");
  const double A = q_inner(c.lplus, xb), B = q_inner(c.lminus, xb);
  if (!(A * B > 0.0)) throw Error(ErrorKind::invariant, "hull basepoint is not between the endpoints");
  const double s_star = 0.5 * std::log(B / A);
  // signed position of the base point from the foot of o on the base geodesic
  const Vec vp = p.base + p.tangent, vm = p.base - p.tangent;
  const double sigma = o ? -0.5 * std::log(minkowski(vm, *o) / minkowski(vp, *o)) : -0.5 * std::log(vm(0) / vp(0));
  const double s = s_star + sigma;
  c.point = (std::exp(s) * c.lplus + std::exp(-s) * c.lminus) / std::sqrt(-2.0 * pm);
  return c;
}

std::vector<FlowPoint> flow_samples(int n, std::size_t count, double radius, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<FlowPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec d(n), u(n);
    for (int j = 0; j < n; ++j) d(j) = N(rng);
    for (int j = 0; j < n; ++j) u(j) = N(rng);
    const double r = radius * std::sqrt(U(rng));
    Vec b(n + 1), t = Vec::Zero(n + 1);
    b(0) = std::cosh(r);
    b.tail(n) = std::sinh(r) * d.normalized();
    t.tail(n) = u.normalized();
    out.push_back(make_flow_point(b, t));
  }
  return out;
}

ContractionCertificate certify(const Representation& rep, const CertifyConfig& cfg) {
  if (cfg.samples == 0 || cfg.samples > 100000) throw Error(ErrorKind::bad_input, "sample count out of range");
  if (!(cfg.T_max > 0.0 && cfg.T_max <= 200.0)) throw Error(ErrorKind::bad_input, "T_max must lie in (0, 200]");
  {
    const auto s = rep.split ? split_limit_set(rep) : limit_set_sample(rep, 3);
    if (s.verdict != Verdict::acausal)
      throw Error(ErrorKind::certification,
                  std::string("acausality precondition failed (verdict ") + to_string(s.verdict) + ")");
  }
  if (!rep.has_base()) throw Error(ErrorKind::bad_input, "certificate needs a base hyperbolic structure");
  ContractionCertificate cert;
  cert.config = cfg;
  const auto fam = default_family(rep.n);
  const auto pts = flow_samples(rep.n, cfg.samples, cfg.sample_radius, cfg.seed);
  cert.samples.resize(pts.size());
  const double horizon = std::max(cfg.fit_time, 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    SampleRecord& rec = cert.samples[i];
    rec.id = i;
    rec.p = pts[i];
    rec.doubling_t = std::numeric_limits<double>::infinity();
    try {
      const auto e = endpoint_maps(pts[i], rep, fam.x0);
      std::vector<double> ts, am;
      walk_alphas(pts[i], rep, fam, e, cfg.T_max, [&](double t, double a_minus, double a_plus) {
        if (t <= horizon + 1e-12) {
          ts.push_back(t);
          am.push_back(a_minus);
        }
        if (!std::isfinite(rec.doubling_t) && a_plus >= 2.0 && a_minus <= 0.5) {
          rec.doubling_t = t;
          rec.factor = a_plus;
          rec.factor_minus = a_minus;
        }
        return t < horizon || !std::isfinite(rec.doubling_t);
      });
      for (std::size_t k = 0; k < ts.size(); ++k) rec.alpha_minus.emplace_back(ts[k], am[k]);
      const auto f = log_fit(ts, am);
      rec.rate = f.slope;
      rec.r2 = f.r2;
      if (!std::isfinite(rec.doubling_t)) rec.failure = "no doubling time up to T_max";
      else if (!(rec.rate < 0.0)) rec.failure = "alpha^- rate is not negative";
      else if (!(rec.r2 > 0.9)) rec.failure = "alpha^- fit has R^2 <= 0.9";
      rec.pass = rec.failure.empty();
    } catch (const Error& ex) {
      rec.failure = ex.what();
      rec.pass = false;
    }
  });

  const auto centers = flow_samples(rep.n, cfg.net_size, cfg.sample_radius, cfg.seed + 1);
  for (std::size_t j = 0; j < centers.size(); ++j) cert.net.push_back(NetSection{j, centers[j].base, 0, 0.0});
  for (const auto& rec : cert.samples) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d = hyperbolic_distance(rec.p.base, centers[j].base);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    ++cert.net[best].members;
    if (std::isfinite(rec.doubling_t))
      cert.net[best].return_time = std::max(cert.net[best].return_time, rec.doubling_t);
  }
  for (const auto& s : cert.net) cert.T = std::max(cert.T, s.return_time);
  for (const auto& rec : cert.samples)
    for (const auto& [t, v] : rec.alpha_minus)
      if (t <= cert.T + 1e-12) cert.a = std::max(cert.a, v);
  if (cert.T > 0.0)
    for (auto& rec : cert.samples)
      for (const auto& [t, v] : rec.alpha_minus)
        rec.chained_ok = rec.chained_ok && v <= cert.a * std::pow(0.5, t / cert.T - 1.0) * (1.0 + 1e-12);
  cert.C_delta = distortion_constant(rep, fam, cfg.delta, 32, cfg.seed);
  cert.pass = std::all_of(cert.samples.begin(), cert.samples.end(), [](const SampleRecord& r) { return r.pass; });
  return cert;
}

}  // namespace ads

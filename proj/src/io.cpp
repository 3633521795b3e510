#include "adsanosov/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ads {

namespace {

std::string fmt(double x, const char* f = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Mat mat_from(const Json& a, int rows, const char* what) {
  if (!a.is_array() || static_cast<int>(a.size()) != rows * rows)
    throw Error(ErrorKind::bad_input, std::string(what) + ": expected " + std::to_string(rows * rows) + " entries");
  Mat m(rows, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) {
      const auto& v = a[static_cast<std::size_t>(i * rows + j)];
      if (!v.is_number()) throw Error(ErrorKind::bad_input, std::string(what) + ": non-numeric entry");
      m(i, j) = v.get<double>();
    }
  return m;
}

std::vector<Mat> mats_from(const Json& a, int rows, const char* what) {
  if (!a.is_array() || a.empty()) throw Error(ErrorKind::bad_input, std::string(what) + " must be a non-empty list");
  std::vector<Mat> out;
  for (const auto& m : a) out.push_back(mat_from(m, rows, what));
  return out;
}

bool fixes_e1(const Mat& g) {
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    const double want = k == 1 ? 1.0 : 0.0;
    if (std::abs(g(k, 1) - want) > 1e-12 || std::abs(g(1, k) - want) > 1e-12) return false;
  }
  return true;
}

Mat drop_e1(const Mat& g) {
  const auto d = g.rows() - 1;
  Mat b(d, d);
  auto idx = [](Eigen::Index i) { return i == 0 ? Eigen::Index{0} : i + 1; };
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) b(i, j) = g(idx(i), idx(j));
  return b;
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Json mat_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(number(m(i, j)));
  return a;
}

Json representation_to_json(const Representation& rep) {
  Json j;
  j["n"] = rep.n;
  j["labels"] = rep.labels;
  Json g = Json::array();
  for (const auto& m : rep.gens) g.push_back(mat_json(m));
  j["generators"] = g;
  j["relators"] = rep.relators;
  j["kind"] = to_string(rep.kind);
  if (rep.has_base()) {
    Json b = Json::array();
    for (const auto& m : rep.base) b.push_back(mat_json(m));
    j["base"] = b;
  }
  if (rep.product) {
    Json l = Json::array(), r = Json::array();
    for (const auto& m : rep.product->left) l.push_back(mat_json(m));
    for (const auto& m : rep.product->right) r.push_back(mat_json(m));
    j["product"] = {{"left", l}, {"right", r}};
  }
  if (rep.split) j["split"] = {{"p", rep.split->p}, {"q", rep.split->q}};
  return j;
}

Representation representation_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::bad_input, "representation must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw Error(ErrorKind::bad_input, "missing integer field n");
    Representation rep;
    rep.n = j["n"].get<int>();
    if (rep.n < 2 || rep.n > 3) throw Error(ErrorKind::bad_input, "n must be 2 or 3");
    if (!j.contains("generators")) throw Error(ErrorKind::bad_input, "missing field generators");
    rep.gens = mats_from(j["generators"], rep.n + 2, "generators");
    if (!j.contains("labels")) throw Error(ErrorKind::bad_input, "missing field labels");
    rep.labels = j["labels"].get<std::vector<std::string>>();
    if (rep.labels.size() != rep.gens.size()) throw Error(ErrorKind::bad_input, "labels and generators differ in length");
    for (const auto& l : rep.labels)
      if (l.size() != 1 || !std::islower(static_cast<unsigned char>(l[0])))
        throw Error(ErrorKind::bad_input, "labels must be single lowercase letters");
    if (j.contains("relators")) rep.relators = j["relators"].get<std::vector<std::string>>();
    if (j.contains("product")) {
      const auto& p = j["product"];
      if (!p.contains("left") || !p.contains("right")) throw Error(ErrorKind::bad_input, "product needs left and right");
      ProductData pd{mats_from(p["left"], 2, "product.left"), mats_from(p["right"], 2, "product.right")};
      if (pd.left.size() != rep.gens.size() || pd.right.size() != rep.gens.size())
        throw Error(ErrorKind::bad_input, "product factor count differs from generators");
      rep.product = pd;
    }
    if (j.contains("split")) rep.split = SplitConstruction{j["split"].value("p", 1), j["split"].value("q", 1)};
    bool embedded = true;
    for (const auto& g : rep.gens) embedded = embedded && fixes_e1(g);
    if (j.contains("base")) {
      rep.base = mats_from(j["base"], rep.n + 1, "base");
      if (rep.base.size() != rep.gens.size()) throw Error(ErrorKind::bad_input, "base count differs from generators");
    } else if (embedded) {
      for (const auto& g : rep.gens) rep.base.push_back(drop_e1(g));
    } else if (rep.product) {
      for (const auto& m : rep.product->left) rep.base.push_back(sl2_to_so12(m));
    }
    if (j.contains("kind")) rep.kind = base_kind_from(j["kind"].get<std::string>());
    else rep.kind = embedded ? BaseKind::fuchsian_lattice : rep.product ? BaseKind::product : BaseKind::custom;
    validate(rep);
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_input, std::string("malformed representation JSON: ") + e.what());
  }
}

Representation read_representation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::bad_input, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_input, path + ": " + e.what());
  }
  return representation_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::bad_input, "cannot write " + path);
  out << text;
}

void write_representation(const std::string& path, const Representation& rep) {
  write_text(path, representation_to_json(rep).dump(2) + "\n");
}

void write_limit_set_csv(std::ostream& os, const LimitSetSample& s) {
  const int m = s.n + 2;
  os << "word";
  for (int i = 0; i < m; ++i) os << ",lift_" << i;
  os << ",theta";
  for (int i = 0; i <= s.n; ++i) os << ",Y_" << i;
  os << "\n";
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    os << (k < s.words.size() ? s.words[k] : std::string());
    for (int i = 0; i < m; ++i) os << "," << fmt(s.points[k].lift(i));
    os << "," << fmt(s.conf[k].theta);
    for (int i = 0; i <= s.n; ++i) os << "," << fmt(s.conf[k].Y(i));
    os << "\n";
  }
}

std::string limit_set_svg(const LimitSetSample& s, const DirichletApprox* walls) {
  if (s.n != 2) throw Error(ErrorKind::bad_input, "SVG output needs n = 2");
  constexpr double pi = std::numbers::pi;
  auto X = [](double th) { return (th + pi) / (2.0 * pi) * 1000.0; };
  auto Y = [](double ph) { return (pi - ph) / (2.0 * pi) * 1000.0; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
  os << "<rect width=\"1000\" height=\"1000\" fill=\"white\" stroke=\"black\"/>\n";
  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* style) {
    if (pts.size() < 2) return;
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& [a, b] : pts) os << fmt(X(a), "%.3f") << "," << fmt(Y(b), "%.3f") << " ";
    os << "\"/>\n";
  };
  if (walls) {
    for (const auto& hs : walls->entries) {
      const Vec& u = hs.u;
      const double A = std::hypot(u(0), u(1)), alpha = std::atan2(u(1), u(0));
      if (A < 1e-14) continue;
      for (int branch : {1, -1}) {
        std::vector<std::pair<double, double>> run;
        for (int k = 0; k <= 400; ++k) {
          const double ph = -pi + 2.0 * pi * k / 400;
          const double rhs = (u(2) * std::cos(ph) + u(3) * std::sin(ph)) / A;
          if (std::abs(rhs) > 1.0) {
            polyline(run, "stroke=\"steelblue\" stroke-width=\"0.6\"");
            run.clear();
            continue;
          }
          const double th = wrap_angle(alpha + branch * std::acos(rhs));
          if (!run.empty() && std::abs(th - run.back().first) > pi) {
            polyline(run, "stroke=\"steelblue\" stroke-width=\"0.6\"");
            run.clear();
          }
          run.emplace_back(th, ph);
        }
        polyline(run, "stroke=\"steelblue\" stroke-width=\"0.6\"");
      }
    }
  }
  std::vector<std::pair<double, double>> curve;
  for (const auto& c : s.conf) curve.emplace_back(wrap_angle(c.theta), std::atan2(c.Y(2), c.Y(1)));
  std::sort(curve.begin(), curve.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::pair<double, double>> run;
  for (const auto& p : curve) {
    if (!run.empty() && std::abs(p.first - run.back().first) > pi) {
      polyline(run, "stroke=\"crimson\" stroke-width=\"1.5\"");
      run.clear();
    }
    run.push_back(p);
  }
  polyline(run, "stroke=\"crimson\" stroke-width=\"1.5\"");
  for (const auto& [th, ph] : curve)
    os << "<circle cx=\"" << fmt(X(th), "%.3f") << "\" cy=\"" << fmt(Y(ph), "%.3f") << "\" r=\"2\" fill=\"crimson\"/>\n";
  os << "</svg>\n";
  return os.str();
}

Json certificate_to_json(const ContractionCertificate& c) {
  Json j;
  j["pass"] = c.pass;
  Json samples = Json::array();
  for (const auto& s : c.samples) {
    Json r;
    r["id"] = s.id;
    r["ray"] = {{"base", vec_json(s.p.base)}, {"tangent", vec_json(s.p.tangent)},
                {"xi_plus", vec_json(s.p.xi_plus)}, {"xi_minus", vec_json(s.p.xi_minus)}};
    r["doubling_t"] = number(s.doubling_t);
    r["factor"] = number(s.factor);
    r["factor_minus"] = number(s.factor_minus);
    Json am = Json::array();
    for (const auto& [t, v] : s.alpha_minus) am.push_back(Json::array({number(t), number(v)}));
    r["alpha_minus"] = am;
    r["rate"] = number(s.rate);
    r["r2"] = number(s.r2);
    r["chained_ok"] = s.chained_ok;
    r["pass"] = s.pass;
    if (!s.failure.empty()) r["failure"] = s.failure;
    samples.push_back(r);
  }
  j["samples"] = samples;
  j["C_delta"] = number(c.C_delta);
  j["T"] = number(c.T);
  j["a"] = number(c.a);
  Json net = Json::array();
  for (const auto& s : c.net)
    net.push_back({{"id", s.id}, {"center", vec_json(s.center)}, {"members", s.members},
                   {"return_time", number(s.return_time)}});
  j["net"] = net;
  const auto& k = c.config;
  j["config"] = {{"samples", k.samples},   {"T_max", number(k.T_max)},       {"seed", k.seed},
                 {"fit_time", number(k.fit_time)}, {"delta", number(k.delta)}, {"net_size", k.net_size},
                 {"sample_radius", number(k.sample_radius)}};
  j["tolerances"] = {{"flow", kFlowTol},           {"grid_step", kGridStep}, {"endpoint_depth", kEndpointDepth},
                     {"r2_min", 0.9},              {"doubling_factor", 2.0}};
  return j;
}

void write_mesh_csv(std::ostream& os, const SurfaceMesh& m) {
  os << "i,j,y1,y2,psi,psi_nu,K\n";
  for (int j = 0; j < m.N; ++j)
    for (int i = 0; i < m.N; ++i) {
      const auto id = m.index(i, j);
      const Vec2 y = m.y(i, j);
      os << i << "," << j << "," << fmt(y(0)) << "," << fmt(y(1)) << "," << fmt(m.psi[id]) << ","
         << fmt(m.psi_nu[id]) << ",";
      if (id < m.K.size() && std::isfinite(m.K[id])) os << fmt(m.K[id]);
      os << "\n";
    }
}

}  // namespace ads

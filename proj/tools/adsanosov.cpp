// adsanosov: command-line front end.
#include "adsanosov/anosov.hpp"
#include "adsanosov/convex_core.hpp"
#include "adsanosov/dirichlet.hpp"
#include "adsanosov/gallery.hpp"
#include "adsanosov/hilbert.hpp"
#include "adsanosov/io.hpp"
#include "adsanosov/lie.hpp"
#include "adsanosov/surface.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace ads;

namespace {

struct Options {
  std::string input;
  std::string out;
  double tol = kDefaultTol;
  unsigned long long seed = 1;
  int word_radius = 3;
  std::size_t samples = 0;  // 0: subcommand default
  double eps = 0.05;
  double nu = 0.05;
  double tmax = 50.0;
  std::string letters;
  std::string side = "future";
  static constexpr double kDefaultTol = 1e-9;
};

Json config_json(const std::string& cmd, const Options& o, std::size_t samples) {
  return {{"command", cmd},     {"input", o.input},         {"seed", o.seed},   {"word_radius", o.word_radius},
          {"samples", samples}, {"tol", o.tol},             {"eps", o.eps},     {"nu", o.nu},
          {"tmax", o.tmax},     {"threads_cap_env", "ADSANOSOV_THREADS"}};
}

void emit(const Options& o, const Json& report, const std::string& suffix = ".json") {
  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) std::cout << text;
  else write_text(o.out + suffix, text);
}

std::string with_suffix(const Options& o, const std::string& s) { return o.out + s; }

Vec basepoint_for(const Representation& rep, const ConvexBody& body) {
  if (rep.kind == BaseKind::fuchsian_lattice) {
    Vec e0 = Vec::Zero(rep.n + 2);
    e0(0) = 1.0;
    return e0;
  }
  return body_basepoint(body);
}

int cmd_limit_set(const Options& o) {
  const auto rep = read_representation(o.input);
  const auto s = limit_set_sample(rep, o.word_radius);
  Json r;
  r["config"] = config_json("limit-set", o, s.points.size());
  r["tolerances"] = {{"causal", kCausalTol}, {"margin_strict", 1e-3}};
  r["verdict"] = to_string(s.verdict);
  r["points"] = s.points.size();
  r["margin"] = number(s.margin);
  r["max_ratio"] = number(s.max_ratio);
  r["lightlike_pairs"] = s.lightlike_pairs;
  r["timelike_pairs"] = s.timelike_pairs;
  r["min_lightlike_residual"] = number(s.min_lightlike_residual);
  r["max_pair_product"] = number(s.max_pair_product);
  r["graph_lipschitz"] = number(s.graph.lipschitz);
  if (!o.out.empty()) {
    std::ostringstream csv;
    write_limit_set_csv(csv, s);
    write_text(with_suffix(o, ".csv"), csv.str());
    if (rep.n == 2) {
      std::optional<DirichletApprox> walls;
      if (s.verdict == Verdict::acausal && !rep.split) {
        const auto body = convex_hull(s);
        walls = dirichlet_build(rep, body, basepoint_for(rep, body), 2);
      }
      write_text(with_suffix(o, ".svg"), limit_set_svg(s, walls ? &*walls : nullptr));
    }
  }
  emit(o, r);
  return 0;
}

int cmd_cartan(const Options& o) {
  const auto rep = read_representation(o.input);
  const auto ball = word_ball(rep, o.word_radius);
  std::ostringstream os;
  os << "word,lambda,mu\n";
  char buf[96];
  for (const auto& w : ball) {
    const auto ct = cartan_decompose(w.m);
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", ct.lambda, ct.mu);
    os << w.word << buf;
  }
  if (o.out.empty()) std::cout << os.str();
  else write_text(o.out, os.str());
  return 0;
}

int cmd_scan(const Options& o) {
  const auto rep = read_representation(o.input);
  std::string letters = o.letters;
  if (letters.empty())
    for (const auto& l : rep.labels) letters += l;
  const std::size_t keep = o.samples ? o.samples : 50;
  const auto sc = top_lambda_words(rep, letters, o.word_radius, keep);
  std::vector<Mat> ctrl;
  for (int k = 1; k <= 60; ++k) ctrl.push_back(cartan_a(rep.n, k, k));
  const auto cs = balanced_distortion_scan(ctrl);
  Json r;
  r["config"] = config_json("scan-distortion", o, keep);
  r["config"]["letters"] = letters;
  r["tolerances"] = {{"gap_bound", -1.0}, {"balanced_threshold", kBalancedThreshold}};
  r["scanned"] = sc.scanned;
  r["max_mu_minus_lambda"] = number(sc.max_gap);
  r["unbalanced"] = sc.max_gap <= -1.0;
  Json words = Json::array();
  for (std::size_t i = 0; i < sc.words.size(); ++i)
    words.push_back({{"word", sc.words[i]}, {"lambda", number(sc.lambda[i])}, {"mu", number(sc.mu[i])}});
  r["top_words"] = words;
  r["control_a_kk"] = {{"balanced", !cs.no_balanced_tail}, {"tail_max_nu", number(cs.tail_max_nu)}};
  emit(o, r);
  return 0;
}

int cmd_convex_core(const Options& o) {
  const auto rep = read_representation(o.input);
  const auto s = limit_set_sample(rep, o.word_radius);
  const auto body = convex_hull(s);
  Json r;
  r["config"] = config_json("convex-core", o, s.points.size());
  r["tolerances"] = {{"spacelike_support", kSpacelikeSupportTol}, {"lipschitz", 1e-6}};
  r["limit_set_verdict"] = to_string(s.verdict);
  r["hull_vertices"] = body.hull.vertices.size();
  if (body.degenerate()) {
    r["verdict"] = "flat-hull";
    r["facets"] = 0;
    emit(o, r);
    return 0;
  }
  const auto sup = support_spacelike_check(body);
  r["verdict"] = "full-dimensional";
  r["facets"] = sup.facets;
  r["support"] = {{"min_minus_q", number(sup.min_minus_q)}, {"all_spacelike", sup.pass}};
  const auto rd = regular_domain_bounds(s, 8, 24);
  const auto g = boundary_graphs(body, rd);
  r["graphs"] = {{"grid", g.grid.size()},          {"min_gap", number(g.min_gap)},
                 {"min_margin_minus", number(g.min_margin_minus)}, {"min_margin_plus", number(g.min_margin_plus)},
                 {"lipschitz", number(g.lipschitz)}, {"lipschitz_ok", g.lipschitz <= 1.0 + 1e-6}};
  if (!o.out.empty()) {
    std::ostringstream csv;
    csv << "Y_0,Y_1,Y_2" << (rep.n == 3 ? ",Y_3" : "") << ",F_minus,F_plus\n";
    char buf[64];
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
      for (Eigen::Index k = 0; k < g.grid[i].size(); ++k) {
        std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", g.grid[i](k));
        csv << buf;
      }
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", g.F_minus[i], g.F_plus[i]);
      csv << buf;
    }
    write_text(with_suffix(o, ".csv"), csv.str());
  }
  emit(o, r);
  return sup.pass ? 0 : 1;
}

int cmd_hilbert(const Options& o) {
  const std::size_t pairs = o.samples ? o.samples : 1000;
  Json r;
  r["config"] = config_json("hilbert", o, pairs);
  r["tolerances"] = {{"chord_bisection", kChordTol}, {"calibration", 1e-9}, {"ads_chord", 1e-6}};
  const auto cal = klein_calibration(pairs, o.seed);
  r["klein_calibration"] = {{"pairs", cal.pairs}, {"max_error", number(cal.max_error)}, {"pass", cal.max_error <= 1e-9}};
  if (!o.input.empty()) {
    const auto rep = read_representation(o.input);
    const auto body = convex_hull(limit_set_sample(rep, o.word_radius));
    if (!body.degenerate()) {
      const auto ch = limit_chord_check(body, std::min<std::size_t>(pairs, 200), o.seed);
      r["ads_chords"] = {{"tested", ch.tested}, {"max_error", number(ch.max_error)}, {"pass", ch.max_error <= 1e-6}};
      const auto pts = hull_samples(body, 8, o.seed);
      const auto ctx = hull_context(body);
      Json q = Json::array();
      for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
        q.push_back({{"x", vec_json(pts[i])}, {"y", vec_json(pts[i + 1])},
                     {"d_hull", number(hilbert_distance_lifted(ctx, pts[i], pts[i + 1]))}});
      r["queries"] = q;
    } else {
      r["ads_chords"] = "flat hull: chords lie in the boundary";
    }
  }
  emit(o, r);
  return 0;
}

int cmd_dirichlet(const Options& o) {
  const auto rep = read_representation(o.input);
  const auto body = convex_hull(limit_set_sample(rep, 3));
  const Vec x0 = basepoint_for(rep, body);
  const auto D = dirichlet_build(rep, body, x0, o.word_radius, true, 4000, o.seed);
  const std::size_t n = o.samples ? o.samples : 1000;
  const auto t = tiling_tests(D, body, n, o.seed, kWallTol);
  Json r;
  r["config"] = config_json("dirichlet", o, n);
  r["tolerances"] = {{"wall", kWallTol}, {"locate_cap", kLocateCap}};
  r["basepoint"] = vec_json(x0);
  r["candidates"] = D.candidates;
  Json hs = Json::array();
  for (const auto& e : D.entries) hs.push_back({{"word", e.word}, {"u", vec_json(e.u)}});
  r["half_spaces"] = hs;
  r["tiling"] = {{"samples", t.samples},       {"covered", t.covered},       {"uncovered", t.uncovered},
                 {"interior_overlaps", t.interior_overlaps}, {"boundary_ties", t.boundary_ties},
                 {"max_local", t.max_local},   {"mean_local", number(t.mean_local)}, {"diameter", number(t.diameter)},
                 {"pass", t.pass()}};
  emit(o, r);
  return t.pass() ? 0 : 1;
}

int cmd_boundary_map(const Options& o) {
  const auto rep = read_representation(o.input);
  if (!rep.has_base()) throw Error(ErrorKind::bad_input, "boundary map needs a base hyperbolic structure");
  const std::size_t n = o.samples ? o.samples : 16;
  const auto xis = sphere_grid(rep.n - 1, static_cast<int>(n));
  Vec x0 = Vec::Zero(rep.n + 2);
  x0(0) = 1.0;
  std::vector<BoundaryImage> img(xis.size());
  for (std::size_t i = 0; i < xis.size(); ++i) img[i] = boundary_map(rep, xis[i], kEndpointDepth, x0);
  Json r;
  r["config"] = config_json("boundary-map", o, n);
  r["tolerances"] = {{"step", kBoundaryStep}, {"depth", kEndpointDepth}};
  Json pts = Json::array();
  for (std::size_t i = 0; i < xis.size(); ++i)
    pts.push_back({{"xi", vec_json(xis[i])}, {"image", vec_json(img[i].point.lift)},
                   {"residual", number(img[i].residual)}, {"word", img[i].words.empty() ? "" : img[i].words.back()}});
  r["samples"] = pts;
  emit(o, r);
  return 0;
}

int cmd_certify(const Options& o) {
  const auto rep = read_representation(o.input);
  CertifyConfig cfg;
  cfg.seed = o.seed;
  cfg.T_max = o.tmax;
  if (o.samples) cfg.samples = o.samples;
  const auto cert = certify(rep, cfg);
  Json j = certificate_to_json(cert);
  j["input"] = o.input;
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) std::cout << text;
  else write_text(o.out, text);
  std::cerr << "certificate: " << (cert.pass ? "PASS" : "FAIL") << "\n";
  return cert.pass ? 0 : 2;
}

int cmd_surface(const Options& o) {
  const auto rep = read_representation(o.input);
  if (rep.n != 2) throw Error(ErrorKind::bad_input, "surface needs n = 2");
  if (o.side != "future" && o.side != "past") throw Error(ErrorKind::bad_input, "side must be future or past");
  const auto body = convex_hull(limit_set_sample(rep, o.word_radius));
  auto mesh = mesh_from_body(body, o.side == "future");
  const auto sm = smooth_convolve(mesh, o.nu);
  const auto cv = curvature_estimate(mesh);
  const std::size_t tri = o.samples ? o.samples : 100;
  Json r;
  r["config"] = config_json("surface", o, tri);
  r["config"]["side"] = o.side;
  r["tolerances"] = {{"convexity", -1e-8}, {"spacelike_slope", kSpacelikeSlopeTol}, {"curvature", 1e-2},
                     {"cat_slack", kCatSlackTol}, {"kernel_truncation", kKernelTruncation}};
  r["mesh"] = {{"points_per_side", mesh.N}, {"half_width", mesh.half_width}, {"band", mesh.band}};
  r["smoothing"] = {{"nu", number(sm.nu)}, {"max_deviation", number(sm.max_deviation)},
                    {"lipschitz_before", number(sm.lipschitz_before)}, {"lipschitz_after", number(sm.lipschitz_after)},
                    {"min_second_difference", number(sm.min_hessian)}, {"convex", sm.convex}};
  r["curvature"] = {{"cells", cv.cells}, {"K_min", number(cv.K_min)}, {"K_max", number(cv.K_max)},
                    {"max_slope", number(cv.max_slope)}, {"pass", cv.K_max <= -1.0 + 1e-2}};
  const auto cat = cat_comparison_test(mesh, static_cast<int>(tri), o.seed);
  r["cat"] = {{"triangles", cat.triangles.size()}, {"min_slack", number(cat.min_slack)}, {"pass", cat.pass}};
  if (!o.out.empty()) {
    std::ostringstream csv;
    write_mesh_csv(csv, mesh);
    write_text(with_suffix(o, ".csv"), csv.str());
  }
  emit(o, r);
  return cat.pass ? 0 : 1;
}

int cmd_examples(const Options& o) {
  const std::string dir = o.out.empty() ? "." : o.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::bad_input, "cannot create " + dir);
  for (const auto& name : gallery_names()) {
    const std::string path = (std::filesystem::path(dir) / (name + ".json")).string();
    write_representation(path, gallery_example(name));
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-de Sitter limit sets, convex cores and Anosov certificates"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* c, bool needs_input) {
    if (needs_input) c->add_option("input", o.input, "representation JSON")->required();
    c->add_option("--out", o.out, "output path or prefix");
    c->add_option("--tol", o.tol, "tolerance");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--word-radius", o.word_radius, "word radius")->check(CLI::Range(0, 16));
    c->add_option("--samples", o.samples, "sample count");
    c->add_option("--eps", o.eps, "enlargement epsilon");
    c->add_option("--nu", o.nu, "smoothing scale");
    c->add_option("--tmax", o.tmax, "flow time bound");
  };
  struct Cmd {
    const char* name;
    const char* help;
    bool input;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"limit-set", "limit-set sample, verdict, CSV and SVG", true, cmd_limit_set},
      {"cartan", "per-word Cartan projections", true, cmd_cartan},
      {"scan-distortion", "largest-lambda words and balanced-distortion report", true, cmd_scan},
      {"convex-core", "hull boundary graphs and support planes", true, cmd_convex_core},
      {"hilbert", "Hilbert metric calibration and distance queries", false, cmd_hilbert},
      {"dirichlet", "Dirichlet half-spaces and tiling report", true, cmd_dirichlet},
      {"boundary-map", "sampled boundary map", true, cmd_boundary_map},
      {"certify", "contraction certificate JSON", true, cmd_certify},
      {"surface", "smoothed boundary mesh, curvature and comparison triangles", true, cmd_surface},
      {"examples", "write the built-in gallery", false, cmd_examples},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) {
    auto* s = app.add_subcommand(c.name, c.help);
    common(s, c.input);
    if (std::string(c.name) == "hilbert") s->add_option("input", o.input, "representation JSON");
    if (std::string(c.name) == "scan-distortion") s->add_option("--letters", o.letters, "generator letters");
    if (std::string(c.name) == "surface") s->add_option("--side", o.side, "future or past");
    subs.emplace_back(s, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  try {
    for (const auto& [s, c] : subs)
      if (s->parsed()) return c->run(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 3;
}

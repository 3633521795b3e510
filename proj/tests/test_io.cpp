#include "doctest.h"

#include "adsanosov/gallery.hpp"
#include "adsanosov/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace ads;

namespace {
double maxdiff(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return d;
}
}  // namespace

TEST_CASE("representation JSON round trip") {
  for (const auto& name : {"fuchsian-genus2", "product-deformed", "torus-universe", "small-deformation"}) {
    const auto rep = gallery_example(name);
    const auto j = representation_to_json(rep);
    const auto back = representation_from_json(Json::parse(j.dump()));
    CHECK(back.n == rep.n);
    CHECK(back.labels == rep.labels);
    CHECK(back.relators == rep.relators);
    CHECK(back.kind == rep.kind);
    CHECK(maxdiff(back.gens, rep.gens) == 0.0);
    CHECK(back.base.size() == rep.base.size());
    CHECK(back.product.has_value() == rep.product.has_value());
    CHECK(back.split.has_value() == rep.split.has_value());
    CHECK(back.evaluate("abAB").isApprox(rep.evaluate("abAB"), 1e-14));
    // serialization is stable
    CHECK(representation_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("optional fields are inferred") {
  auto j = representation_to_json(fuchsian_genus2());
  j.erase("base");
  j.erase("kind");
  const auto r = representation_from_json(j);
  CHECK(r.kind == BaseKind::fuchsian_lattice);
  CHECK(maxdiff(r.base, fuchsian_genus2().base) < 1e-15);

  auto p = representation_to_json(product_deformed());
  p.erase("base");
  p.erase("kind");
  const auto rp = representation_from_json(p);
  CHECK(rp.kind == BaseKind::product);
  CHECK(rp.has_base());
}

TEST_CASE("malformed representations are bad input") {
  auto expect_bad = [](const Json& j) {
    try {
      representation_from_json(j);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind == ErrorKind::bad_input);
    }
  };
  expect_bad(Json::array());
  expect_bad(Json{{"n", 2}});
  expect_bad(Json{{"n", 5}, {"generators", Json::array()}, {"labels", Json::array()}});
  expect_bad(Json::parse(R"({"n": 2, "labels": ["a"], "generators": [[1, 2]]})"));
  auto j = representation_to_json(fuchsian_genus2());
  j["labels"][0] = "A";
  expect_bad(j);
  j = representation_to_json(fuchsian_genus2());
  j["labels"] = "abcd";
  expect_bad(j);
  CHECK_THROWS_AS(read_representation("/nonexistent/rep.json"), Error);
}

TEST_CASE("numbers and csv") {
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number(std::nan("")).is_null());
  CHECK(number(0.1).get<double>() == 0.1);
  const auto s = limit_set_sample(fuchsian_genus2(), 1);
  std::ostringstream os;
  write_limit_set_csv(os, s);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "word,lift_0,lift_1,lift_2,lift_3,theta,Y_0,Y_1,Y_2");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == s.points.size());
  const auto svg = limit_set_svg(s);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

// File formats: representation JSON, limit-set CSV/SVG, certificate JSON, surface mesh CSV.
#pragma once

#include "adsanosov/anosov.hpp"
#include "adsanosov/dirichlet.hpp"
#include "adsanosov/reps.hpp"
#include "adsanosov/surface.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace ads {

using Json = nlohmann::ordered_json;

Json representation_to_json(const Representation& rep);
// Generators are authoritative; "product", "base", "kind" and "split" are optional.
Representation representation_from_json(const Json& j);
Representation read_representation(const std::string& path);
void write_representation(const std::string& path, const Representation& rep);

// Columns: word, lift_0..lift_{n+1}, theta, Y_0..Y_n.
void write_limit_set_csv(std::ostream& os, const LimitSetSample& s);
// n = 2: limit curve in the (theta, phi) square [-pi, pi]^2, optional Dirichlet wall traces, 1000 x 1000.
std::string limit_set_svg(const LimitSetSample& s, const DirichletApprox* walls = nullptr);

Json certificate_to_json(const ContractionCertificate& c);

// Columns: i, j, y1, y2, psi, psi_nu, K (interior only, empty elsewhere).
void write_mesh_csv(std::ostream& os, const SurfaceMesh& m);

// Finite doubles as shortest round-trip numbers, non-finite as null.
Json number(double x);
Json vec_json(const Vec& v);
Json mat_json(const Mat& m);  // row-major flat list

void write_text(const std::string& path, const std::string& text);

}  // namespace ads

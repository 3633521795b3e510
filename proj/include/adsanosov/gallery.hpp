// Built-in representations: genus-2 octagon group, its twist deformations, the torus universe.
#pragma once

#include "adsanosov/reps.hpp"

#include <string>
#include <vector>

namespace ads {

inline constexpr double kGalleryTwist = 0.5;
inline constexpr double kSmallTwist = 0.01;

Mat sl2_rotation(double angle);  // acts on H^2 as rotation by angle
Mat sl2_boost(double t);         // translation length t along the real axis
double octagon_inradius();

// Side pairings of the regular octagon with angles pi/4, relator abABcdCD.
std::vector<Mat> genus2_sl2();
// Twist along the separating curve [a, b]: conjugates the c, d generators by a hyperbolic commuting with it.
std::vector<Mat> twist_genus2(const std::vector<Mat>& gens, double t);

Representation fuchsian_genus2();
Representation product_deformed(double twist = kGalleryTwist);
Representation small_deformation(double twist = kSmallTwist);
Representation torus_universe(double a = 1.0, double b = 1.3);
// Free two-generator loxodromic group in SO(1,3) embedded in SO(2,3), for n = 3 smoke tests.
Representation schottky_n3();

std::vector<std::string> gallery_names();
Representation gallery_example(const std::string& name);

}  // namespace ads

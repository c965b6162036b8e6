#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"

#include "billiard_lab/conics.hpp"
#include "billiard_lab/constant_curvature.hpp"
#include "billiard_lab/sampled_curve.hpp"

namespace billiard_lab {

/// A curve built from a JSON description, plus any exact geometry it carries.
struct LoadedCurve {
  SampledCurve curve;
  std::string kind;
  /// Planar ellipse or circle: its quadratic form.
  std::optional<QuadraticForm> form;
  /// cone_section or small_circle: the surface and, for unperturbed cones, the conic.
  std::optional<SpaceForm> space;
  std::optional<SphericalConic> conic;
};

/// Kinds:
///   ellipse       {"a", "b", "rotation"?, "center"?}
///   circle        {"radius"?, "center"?}
///   superellipse  {"exponent"?, "a"?, "b"?}            |x/a|^p + |y/b|^p = 1
///   fourier       {"x": {"cos": [...], "sin": [...]}, "y": {...}, "period"?}
///                 cos lists start at k = 0, sin lists at k = 1
///   samples       {"points": [[...], ...], "period"?}   2 or 3 coordinates per point
///   cone_section  {"matrix": 3x3, "geometry"?: "sphere"|"hyperbolic", "perturbation"?, "mode"?}
///   small_circle  {"colatitude"}
/// `samples` is the sample count for every kind except "samples".
LoadedCurve parse_curve(const nlohmann::json& spec, std::size_t samples);
LoadedCurve load_curve_file(const std::string& path, std::size_t samples);

/// {"matrix": [[...]], "level": 1|0, "center"?: [...]}
QuadraticForm parse_quadric(const nlohmann::json& spec);
QuadraticForm load_quadric_file(const std::string& path);

/// Reads a JSON document, mapping I/O and syntax failures to Error.
nlohmann::json read_json_file(const std::string& path);

}  // namespace billiard_lab

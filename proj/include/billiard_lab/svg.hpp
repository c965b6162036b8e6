#pragma once

#include <optional>
#include <string>
#include <vector>

#include "billiard_lab/geometry.hpp"

namespace billiard_lab {

struct SvgDataset {
  std::vector<Vec2> curve;  // closed
  /// Orbit polyline; each consecutive pair becomes one <line class="chord">.
  std::optional<std::vector<Vec2>> orbit;
  std::optional<std::vector<Vec2>> envelope;  // closed
};

struct SvgStyle {
  double size = 600.0;
  double margin = 20.0;
  std::string curve_color = "#1f3b73";
  std::string chord_color = "#c0392b";
  std::string envelope_color = "#27ae60";
};

/// Standalone SVG document; throws empty_dataset on an empty curve, orbit or envelope.
std::string emit_svg(const SvgDataset& data, const SvgStyle& style = {});

}  // namespace billiard_lab

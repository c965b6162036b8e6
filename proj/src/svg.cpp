#include "billiard_lab/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "billiard_lab/error.hpp"

namespace billiard_lab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string emit_svg(const SvgDataset& data, const SvgStyle& style) {
  if (data.curve.empty()) throw Error(ErrorCode::empty_dataset, "emit_svg: empty curve");
  if (data.orbit && data.orbit->size() < 2) throw Error(ErrorCode::empty_dataset, "emit_svg: orbit has no chords");
  if (data.envelope && data.envelope->empty()) throw Error(ErrorCode::empty_dataset, "emit_svg: empty envelope");

  Vec2 lo = data.curve.front(), hi = lo;
  auto grow = [&](const std::vector<Vec2>& pts) {
    for (const Vec2& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  };
  grow(data.curve);
  if (data.orbit) grow(*data.orbit);
  if (data.envelope) grow(*data.envelope);
  const double extent = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});
  const double scale = (style.size - 2.0 * style.margin) / extent;
  auto px = [&](const Vec2& p) { return num(style.margin + (p.x() - lo.x()) * scale); };
  auto py = [&](const Vec2& p) { return num(style.size - style.margin - (p.y() - lo.y()) * scale); };
  auto path = [&](const std::vector<Vec2>& pts) {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) d += (i == 0 ? "M" : " L") + px(pts[i]) + " " + py(pts[i]);
    return d + " Z";
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(style.size) << "\" height=\"" << num(style.size)
      << "\" viewBox=\"0 0 " << num(style.size) << " " << num(style.size) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<path class=\"curve\" fill=\"none\" stroke=\"" << style.curve_color << "\" stroke-width=\"1.5\" d=\""
      << path(data.curve) << "\"/>\n";
  if (data.envelope) {
    out << "<path class=\"envelope\" fill=\"none\" stroke=\"" << style.envelope_color << "\" stroke-width=\"1\" d=\""
        << path(*data.envelope) << "\"/>\n";
  }
  if (data.orbit) {
    out << "<g stroke=\"" << style.chord_color << "\" stroke-width=\"0.6\">\n";
    const auto& o = *data.orbit;
    for (std::size_t i = 0; i + 1 < o.size(); ++i) {
      out << "<line class=\"chord\" x1=\"" << px(o[i]) << "\" y1=\"" << py(o[i]) << "\" x2=\"" << px(o[i + 1])
          << "\" y2=\"" << py(o[i + 1]) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace billiard_lab

#pragma once

// Minimal self-contained SVG overlay of a scene and trajectories.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "taunav/geometry.hpp"
#include "taunav/scene.hpp"

namespace taunav {

struct SvgPath {
  std::string name;
  std::string color;
  std::vector<Vec2> points;
};

namespace detail {
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}
inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace detail

/// One <path> per trajectory, one <circle> marker per feature, and the woods
/// edge as a dashed <polyline>. World y points up.
inline std::string render_svg(const Scene& scene, const std::vector<SvgPath>& paths,
                              double pixels_per_meter = 10.0) {
  Bounds b = scene.bounds;
  for (const auto& p : paths)
    for (const auto& q : p.points) {
      b.x_min = std::min(b.x_min, q.x);
      b.x_max = std::max(b.x_max, q.x);
      b.y_min = std::min(b.y_min, q.y);
      b.y_max = std::max(b.y_max, q.y);
    }
  const double margin = 2.0;
  b.x_min -= margin;
  b.y_min -= margin;
  b.x_max += margin;
  b.y_max += margin;
  const double w = (b.x_max - b.x_min) * pixels_per_meter;
  const double h = (b.y_max - b.y_min) * pixels_per_meter;
  auto sx = [&](double x) { return detail::fmt((x - b.x_min) * pixels_per_meter); };
  auto sy = [&](double y) { return detail::fmt((b.y_max - y) * pixels_per_meter); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(w) + "\" height=\"" +
         detail::fmt(h) + "\" viewBox=\"0 0 " + detail::fmt(w) + " " + detail::fmt(h) + "\">\n";
  out += "<title>" + detail::xml_escape(scene.id) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + detail::fmt(w) + "\" height=\"" + detail::fmt(h) +
         "\" fill=\"white\"/>\n";

  out += "<polyline fill=\"none\" stroke=\"darkgreen\" stroke-dasharray=\"4 3\" points=\"";
  for (const auto& ref : scene.woods_edge) {
    const Feature& f = scene.at(ref);
    out += sx(f.x_w) + "," + sy(f.y_w) + " ";
  }
  out += "\"/>\n";

  for (const auto& p : paths) {
    if (p.points.empty()) continue;
    out += "<path fill=\"none\" stroke=\"" + detail::xml_escape(p.color) +
           "\" stroke-width=\"1.5\" d=\"M " + sx(p.points[0].x) + " " + sy(p.points[0].y);
    for (std::size_t i = 1; i < p.points.size(); ++i) out += " L " + sx(p.points[i].x) + " " + sy(p.points[i].y);
    out += "\"><title>" + detail::xml_escape(p.name) + "</title></path>\n";
  }

  for (const auto& f : scene.features) {
    std::string fill = "black";
    if (scene.vine && *scene.vine == f.id) fill = "saddlebrown";
    if (scene.pole && *scene.pole == f.id) fill = "gray";
    out += "<circle cx=\"" + sx(f.x_w) + "\" cy=\"" + sy(f.y_w) + "\" r=\"4\" fill=\"" + fill +
           "\"><title>" + detail::xml_escape(f.id) + "</title></circle>\n";
    out += "<text x=\"" + detail::fmt((f.x_w - b.x_min) * pixels_per_meter + 6) + "\" y=\"" + sy(f.y_w) +
           "\" font-size=\"10\">" + detail::xml_escape(f.id) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace taunav

#pragma once

// Scene description and its text format.
//
//   taunav-scene 1
//   name bamberger
//   bounds -5 -10 80 22          # x_min y_min x_max y_max
//   feature A 10 10
//   feature V 10 5
//   vine V                       # optional
//   pole P                       # optional
//   woods_edge A B C D           # at least two features, in flight order
//   start red 0 7.5 0.2          # named initial pose (x y theta)
//
// Unknown keys, duplicate ids and dangling references are rejected.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "taunav/error.hpp"
#include "taunav/geometry.hpp"
#include "taunav/text.hpp"

namespace taunav {

struct Bounds {
  double x_min{0.0};
  double y_min{0.0};
  double x_max{0.0};
  double y_max{0.0};
};

struct Scene {
  std::string id;
  std::vector<Feature> features;
  std::optional<std::string> vine;
  std::optional<std::string> pole;
  std::vector<std::string> woods_edge;
  Bounds bounds{};
  std::vector<std::pair<std::string, Pose>> starts;

  /// Looks up a feature by id. The words "vine" and "pole" also resolve to
  /// the scene's designated obstacles.
  const Feature* find(std::string_view ref) const {
    for (const auto& f : features)
      if (f.id == ref) return &f;
    if (ref == "vine" && vine) return find_id(*vine);
    if (ref == "pole" && pole) return find_id(*pole);
    return nullptr;
  }

  const Feature& at(std::string_view ref) const {
    if (const Feature* f = find(ref)) return *f;
    throw ValidationError("scene '" + id + "' has no feature '" + std::string(ref) + "'");
  }

  std::optional<Pose> start(std::string_view name) const {
    for (const auto& [n, p] : starts)
      if (n == name) return p;
    return std::nullopt;
  }

  std::vector<Vec2> woods_edge_points() const {
    std::vector<Vec2> pts;
    for (const auto& ref : woods_edge) pts.push_back(at(ref).position());
    return pts;
  }

  /// Index in the woods-edge chain of the feature `ref` resolves to.
  std::optional<std::size_t> woods_edge_index(std::string_view ref) const {
    const Feature* f = find(ref);
    if (!f) return std::nullopt;
    for (std::size_t i = 0; i < woods_edge.size(); ++i)
      if (find(woods_edge[i]) == f) return i;
    return std::nullopt;
  }

  void validate() const {
    for (std::size_t i = 0; i < features.size(); ++i)
      for (std::size_t j = i + 1; j < features.size(); ++j)
        if (features[i].id == features[j].id)
          throw ValidationError("duplicate feature id '" + features[i].id + "'");
    if (vine && !find_id(*vine)) throw ValidationError("vine refers to unknown feature '" + *vine + "'");
    if (pole && !find_id(*pole)) throw ValidationError("pole refers to unknown feature '" + *pole + "'");
    if (woods_edge.size() < 2) throw ValidationError("woods_edge needs at least two features");
    for (const auto& ref : woods_edge) at(ref);
  }

 private:
  const Feature* find_id(std::string_view id_) const {
    for (const auto& f : features)
      if (f.id == id_) return &f;
    return nullptr;
  }
};

inline Scene parse_scene(const std::string& content, const std::string& source = "<scene>") {
  Scene scene;
  bool header = false;
  bool have_bounds = false;
  int header_line = 0;
  const auto lines = text::split_lines(content);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li + 1);
    auto tokens = text::tokenize(lines[li]);
    if (tokens.empty()) continue;
    text::LineReader r(source, lineno, std::move(tokens), static_cast<int>(lines[li].size() + 1));
    const text::Token key = r.next("key");
    if (!header) {
      if (key.text != "taunav-scene") r.fail_at(key, "expected header 'taunav-scene 1'");
      const text::Token ver = r.next("format version");
      if (ver.text != "1") r.fail_at(ver, "unsupported scene format version '" + ver.text + "'");
      r.finish();
      header = true;
      header_line = lineno;
      continue;
    }
    if (key.text == "name") {
      scene.id = r.identifier("scene name");
    } else if (key.text == "bounds") {
      scene.bounds.x_min = r.number("x_min");
      scene.bounds.y_min = r.number("y_min");
      scene.bounds.x_max = r.number("x_max");
      scene.bounds.y_max = r.number("y_max");
      if (!(scene.bounds.x_max > scene.bounds.x_min) || !(scene.bounds.y_max > scene.bounds.y_min))
        r.fail_at(key, "bounds must have positive extent");
      have_bounds = true;
    } else if (key.text == "feature") {
      const text::Token& idtok = r.peek();
      Feature f;
      f.id = r.identifier("feature id");
      for (const auto& other : scene.features)
        if (other.id == f.id) r.fail_at(idtok, "duplicate feature id '" + f.id + "'");
      f.x_w = r.number("x coordinate");
      f.y_w = r.number("y coordinate");
      scene.features.push_back(std::move(f));
    } else if (key.text == "vine" || key.text == "pole") {
      const text::Token& ref = r.peek();
      std::string id = r.identifier("feature reference");
      bool found = false;
      for (const auto& f : scene.features) found = found || f.id == id;
      if (!found) r.fail_at(ref, "unknown feature '" + id + "'");
      (key.text == "vine" ? scene.vine : scene.pole) = std::move(id);
    } else if (key.text == "woods_edge") {
      scene.woods_edge.clear();
      while (!r.done()) {
        const text::Token& ref = r.peek();
        std::string id = r.identifier("feature reference");
        bool found = false;
        for (const auto& f : scene.features) found = found || f.id == id;
        if (!found) r.fail_at(ref, "unknown feature '" + id + "'");
        scene.woods_edge.push_back(std::move(id));
      }
    } else if (key.text == "start") {
      std::string name = r.identifier("start name");
      const double x = r.number("x");
      const double y = r.number("y");
      const double th = r.number("theta");
      scene.starts.emplace_back(std::move(name), Pose{x, y, th});
    } else {
      r.fail_at(key, "unknown key '" + key.text + "'");
    }
    r.finish();
  }
  if (!header) throw ParseError(source, 1, 1, "missing header 'taunav-scene 1'");
  if (scene.id.empty()) throw ParseError(source, header_line, 0, "missing 'name'");
  if (!have_bounds) throw ParseError(source, header_line, 0, "missing 'bounds'");
  if (scene.woods_edge.size() < 2)
    throw ParseError(source, header_line, 0, "woods_edge needs at least two features");
  scene.validate();
  return scene;
}

inline Scene load_scene(const std::string& path) { return parse_scene(text::read_file(path), path); }

}  // namespace taunav

#pragma once

// Trajectory CSV I/O. Header row names the columns; `t`, `x` and `y` are
// required, `z` is optional, other columns are ignored on input. Lines
// starting with '#' are comments; cells may be double-quoted. Numbers are
// written with 17 significant digits so a write/read cycle is exact.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "taunav/error.hpp"
#include "taunav/sim.hpp"
#include "taunav/text.hpp"
#include "taunav/trajproc.hpp"

namespace taunav {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {
/// Splits one row into trimmed cells with their 1-based start columns.
/// Cells may be double-quoted; "" inside quotes is a literal quote.
inline std::vector<std::pair<std::string, int>> split_csv(const std::string& line, const std::string& source,
                                                          int lineno) {
  std::vector<std::pair<std::string, int>> cells;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const int col = static_cast<int>(i + 1);
    std::string cell;
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (true) {
        if (i >= line.size()) throw ParseError(source, lineno, col, "unterminated quoted field");
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cell += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        cell += line[i++];
      }
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i < line.size() && line[i] != ',')
        throw ParseError(source, lineno, static_cast<int>(i + 1), "unexpected text after quoted field");
    } else {
      const std::size_t comma = line.find(',', i);
      cell = line.substr(i, comma == std::string::npos ? std::string::npos : comma - i);
      const auto e = cell.find_last_not_of(" \t");
      cell = e == std::string::npos ? std::string() : cell.substr(0, e + 1);
      i = comma == std::string::npos ? line.size() : comma;
    }
    cells.emplace_back(std::move(cell), col);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return cells;
}

inline std::string quote_csv(const std::string& cell) {
  if (cell.find_first_of(",\"") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}
}  // namespace detail

inline RawTrack parse_track_csv(const std::string& content, const std::string& source = "<csv>",
                                std::string id = {}) {
  RawTrack track;
  track.id = id.empty() ? source : std::move(id);
  const auto lines = text::split_lines(content);
  int col_t = -1, col_x = -1, col_y = -1, col_z = -1;
  std::size_t columns = 0;
  bool header = false;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li + 1);
    const std::string& line = lines[li];
    if (line.empty() || line[0] == '#') continue;
    const auto cells = detail::split_csv(line, source, lineno);
    if (!header) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& name = cells[c].first;
        int* slot = name == "t" ? &col_t : name == "x" ? &col_x : name == "y" ? &col_y : name == "z" ? &col_z : nullptr;
        if (slot) {
          if (*slot >= 0) throw ParseError(source, lineno, cells[c].second, "duplicate column '" + name + "'");
          *slot = static_cast<int>(c);
        }
      }
      if (col_t < 0 || col_x < 0 || col_y < 0)
        throw ParseError(source, lineno, 1, "header must contain columns t, x and y");
      columns = cells.size();
      header = true;
      continue;
    }
    if (cells.size() != columns)
      throw ParseError(source, lineno, 1,
                       "expected " + std::to_string(columns) + " fields, found " + std::to_string(cells.size()));
    auto num = [&](int c) {
      double v = 0.0;
      const auto& cell = cells[static_cast<std::size_t>(c)];
      if (!text::parse_double(cell.first, v))
        throw ParseError(source, lineno, cell.second, "invalid number '" + cell.first + "'");
      return v;
    };
    TrackPoint p{num(col_t), num(col_x), num(col_y), std::nullopt};
    if (col_z >= 0) p.z = num(col_z);
    track.points.push_back(p);
  }
  if (!header) throw ParseError(source, 1, 1, "missing header row");
  return track;
}

inline RawTrack load_track_csv(const std::string& path) {
  return parse_track_csv(text::read_file(path), path, std::filesystem::path(path).stem().string());
}

inline std::string format_track_csv(const RawTrack& track) {
  bool has_z = !track.points.empty();
  for (const auto& p : track.points) has_z = has_z && p.z.has_value();
  std::string out = has_z ? "t,x,y,z\n" : "t,x,y\n";
  for (const auto& p : track.points) {
    out += format_number(p.t) + "," + format_number(p.x) + "," + format_number(p.y);
    if (has_z) out += "," + format_number(*p.z);
    out += "\n";
  }
  return out;
}

/// Arc-length curve as a track; the t column carries the distance along the
/// curve (sample index times the chord spacing).
inline std::string format_curve_csv(const ArcCurve& curve) {
  std::string out = "t,x,y\n";
  const double h = curve.spacing();
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    out += format_number(static_cast<double>(i) * h) + "," + format_number(curve.samples[i].x) + "," +
           format_number(curve.samples[i].y) + "\n";
  }
  return out;
}

/// Simulation output: t,x,y,theta,u,segment,tau:<feature>...
inline std::string format_trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x,y,theta,u,segment";
  for (const auto& f : traj.tau_features) out += "," + detail::quote_csv("tau:" + f);
  out += "\n";
  for (const auto& s : traj.samples) {
    out += format_number(s.t) + "," + format_number(s.pose.x) + "," + format_number(s.pose.y) + "," +
           format_number(s.pose.theta) + "," + format_number(s.u) + "," +
           (s.segment < traj.segment_labels.size() ? detail::quote_csv(traj.segment_labels[s.segment]) : std::string());
    for (double tau : s.tau) out += "," + format_number(tau);
    out += "\n";
  }
  return out;
}

/// Writes via a temporary file in the same directory and renames it into place.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError(path, 0, 0, "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw ParseError(path, 0, 0, "write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw ParseError(path, 0, 0, "cannot rename temporary file: " + ec.message());
}

}  // namespace taunav

#pragma once

// Subcommand implementations. Every command returns a process exit status:
//   0  success
//   1  any other error (invalid arguments, numeric failure, ...)
//   2  file or parse error (message carries path and line:column)
//   3  simulation timeout; the partial trajectory is still written

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "taunav/csv.hpp"
#include "taunav/error.hpp"
#include "taunav/protocol.hpp"
#include "taunav/scene.hpp"
#include "taunav/sim.hpp"
#include "taunav/svg.hpp"
#include "taunav/trajproc.hpp"

namespace taunav {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInput = 2, kExitTimeout = 3 };

/// Relative paths that do not exist are retried under $TAUNAV_SEED_DIR.
inline std::string resolve_input(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::exists(path) || fs::path(path).is_absolute()) return path;
  if (const char* seed = std::getenv("TAUNAV_SEED_DIR"); seed && *seed) {
    const fs::path alt = fs::path(seed) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

/// "# generated <UTC time>" line, only written with --stamp.
inline std::string stamp_line() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "# generated %Y-%m-%dT%H:%M:%SZ\n", &tm);
  return buf;
}

struct RunManifest {
  std::string scene_path;
  std::string protocol;  // built-in name or protocol file path
  std::optional<Pose> init;
  Gains gains{};
  SimConfig config{};
  ProtocolConfig protocol_config{};
  std::string out_path;  // empty: stdout
  std::optional<std::string> svg_path;
  bool stamp{false};
};

namespace detail {

/// Runs `body`, mapping library exceptions to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_file_atomic(path, content);
}

inline std::vector<Vec2> positions(const Trajectory& traj) {
  std::vector<Vec2> pts;
  pts.reserve(traj.samples.size());
  for (const auto& s : traj.samples) pts.push_back(s.pose.position());
  return pts;
}

inline Protocol resolve_protocol(const std::string& ref) {
  if (auto p = find_builtin(ref)) return *p;
  return load_protocol(resolve_input(ref));
}

}  // namespace detail

inline int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Scene scene = load_scene(resolve_input(m.scene_path));
    const Protocol protocol = detail::resolve_protocol(m.protocol);
    std::optional<Pose> init = m.init;
    if (!init && protocol.start) {
      init = scene.start(*protocol.start);
      if (!init)
        throw ValidationError("scene '" + scene.id + "' has no start '" + *protocol.start + "'");
    }
    if (!init) throw ValidationError("no initial pose: pass --init or give the protocol a start");

    Trajectory traj;
    int status = kExitOk;
    try {
      traj = run_protocol(scene, protocol, *init, m.gains, m.config, m.protocol_config);
    } catch (const TimeoutError& e) {
      err << "timeout: " << e.what() << "\n";
      traj = e.partial();
      status = kExitTimeout;
    } catch (const SimulationAbort& e) {
      err << "error: " << e.what() << "\n";
      traj = e.partial();
      status = kExitError;
    }
    std::string csv = m.stamp ? stamp_line() : std::string();
    csv += format_trajectory_csv(traj);
    detail::emit(m.out_path, csv, out);
    if (m.svg_path) {
      write_file_atomic(*m.svg_path,
                        render_svg(scene, {{protocol.name, "crimson", detail::positions(traj)}}));
    }
    return status;
  });
}

struct SmoothOptions {
  std::string input;
  double lambda{0.85};
  std::optional<std::size_t> n;  // default: input row count
  std::optional<double> length;
  std::string out_path;
  bool stamp{false};
};

inline int cmd_smooth(const SmoothOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const std::string path = resolve_input(o.input);
    RawTrack track = load_track_csv(path);
    if (track.points.size() < 4)
      throw ParseError(path, 0, 0, "track has " + std::to_string(track.points.size()) +
                                       " rows; at least 4 are required");
    const SmoothingSpline sp = fit_smoothing_spline(track, o.lambda);
    const std::size_t n = o.n.value_or(track.points.size());
    ArcCurve curve = arc_reparam(sp, n);
    if (o.length) {
      const std::vector<ArcCurve> one{curve};
      TruncationResult tr = truncate_common(one, *o.length, n);
      if (tr.kept.empty())
        throw DomainError("track length " + format_number(curve.total_length) + " is shorter than --length " +
                          format_number(*o.length));
      curve = std::move(tr.kept.front());
    }
    std::string csv = o.stamp ? stamp_line() : std::string();
    csv += format_curve_csv(curve);
    detail::emit(o.out_path, csv, out);
    return kExitOk;
  });
}

struct AnalyzeOptions {
  std::string directory;
  std::string scene_path;
  double lambda{0.85};
  std::size_t n{200};
  std::optional<double> length;  // default: shortest track
  std::string out_dir{"."};
  double histogram_bin{0.5};
  // Rejection rule applied to each parsed track before smoothing; a track it
  // returns false for is reported as "filtered". Empty accepts everything.
  std::function<bool(const RawTrack&)> accept;
};

struct TrackReport {
  std::string id;
  std::string status;  // "ok", "short", "unclassifiable", "unparseable", "filtered"
  std::optional<SideLabel> label;
  std::string detail;
};

struct AnalyzeResult {
  std::vector<TrackReport> tracks;
  std::vector<ArcCurve> left;
  std::vector<ArcCurve> right;
};

/// Library side of `analyze`: smooths, truncates and classifies every *.csv
/// in the directory (sorted by file name).
inline AnalyzeResult analyze_tracks(const AnalyzeOptions& o, const Scene& scene) {
  namespace fs = std::filesystem;
  const std::string dir = resolve_input(o.directory);
  if (!fs::is_directory(dir)) throw ParseError(dir, 0, 0, "not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  AnalyzeResult res;
  std::vector<ArcCurve> curves;
  std::vector<std::size_t> report_index;
  for (const auto& f : files) {
    TrackReport rep{f.stem().string(), "ok", std::nullopt, {}};
    try {
      const RawTrack track = load_track_csv(f.string());
      if (o.accept && !o.accept(track)) {
        rep.status = "filtered";
        res.tracks.push_back(std::move(rep));
        continue;
      }
      curves.push_back(arc_reparam(fit_smoothing_spline(track, o.lambda), o.n));
      report_index.push_back(res.tracks.size());
    } catch (const Error& e) {
      rep.status = "unparseable";
      rep.detail = e.what();
    }
    res.tracks.push_back(std::move(rep));
  }
  if (curves.empty()) throw ParseError(dir, 0, 0, "no parseable track");

  double length = 0.0;
  if (o.length) {
    length = *o.length;
  } else {
    length = curves.front().total_length;
    for (const auto& c : curves) length = std::min(length, c.total_length);
  }
  const TruncationResult tr = truncate_common(curves, length, o.n);
  for (std::size_t r : tr.rejected) {
    auto& rep = res.tracks[report_index[r]];
    rep.status = "short";
    rep.detail = "length " + format_number(curves[r].total_length) + " < " + format_number(length);
  }

  if (!scene.vine) throw ValidationError("scene '" + scene.id + "' declares no vine");
  const Vec2 vine = scene.at(*scene.vine).position();
  const auto edge = scene.woods_edge_points();
  const Vec2 heading = edge.back() - edge.front();
  for (std::size_t k = 0; k < tr.kept.size(); ++k) {
    auto& rep = res.tracks[report_index[tr.kept_index[k]]];
    try {
      rep.label = classify_side(tr.kept[k], vine, heading, edge);
      (rep.label->side == Side::LeftOfVine ? res.left : res.right).push_back(tr.kept[k]);
    } catch (const UnclassifiableError& e) {
      rep.status = "unclassifiable";
      rep.detail = e.what();
    }
  }
  return res;
}

inline int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!(o.histogram_bin > 0.0)) throw DomainError("histogram bin width must be positive");
    const Scene scene = load_scene(resolve_input(o.scene_path));
    const AnalyzeResult res = analyze_tracks(o, scene);
    namespace fs = std::filesystem;
    const fs::path dir(o.out_dir);

    std::string report = "track,status,side,penetration_depth,closest_approach\n";
    double max_depth = 0.0;
    std::size_t failed = 0;
    for (const auto& t : res.tracks) {
      report += t.id + "," + t.status + ",";
      if (t.label) {
        report += std::string(to_string(t.label->side)) + "," + format_number(t.label->penetration_depth) + "," +
                  format_number(t.label->closest_approach);
        max_depth = std::max(max_depth, t.label->penetration_depth);
      } else {
        report += ",,";
        ++failed;
        err << "warning: " << t.id << ": " << t.status << (t.detail.empty() ? "" : ": " + t.detail) << "\n";
      }
      report += "\n";
    }
    write_file_atomic((dir / "report.csv").string(), report);
    if (!res.left.empty()) write_file_atomic((dir / "mean_left.csv").string(), format_curve_csv(mean_trajectory(res.left)));
    if (!res.right.empty())
      write_file_atomic((dir / "mean_right.csv").string(), format_curve_csv(mean_trajectory(res.right)));

    const std::size_t bins = static_cast<std::size_t>(std::floor(max_depth / o.histogram_bin)) + 1;
    std::vector<std::size_t> left(bins, 0), right(bins, 0);
    for (const auto& t : res.tracks) {
      if (!t.label) continue;
      const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(t.label->penetration_depth / o.histogram_bin)));
      ++(t.label->side == Side::LeftOfVine ? left : right)[b];
    }
    std::string hist = "depth_lo,depth_hi,left,right\n";
    for (std::size_t b = 0; b < bins; ++b) {
      hist += format_number(static_cast<double>(b) * o.histogram_bin) + "," +
              format_number(static_cast<double>(b + 1) * o.histogram_bin) + "," + std::to_string(left[b]) + "," +
              std::to_string(right[b]) + "\n";
    }
    write_file_atomic((dir / "depth_histogram.csv").string(), hist);

    out << "left=" << res.left.size() << " right=" << res.right.size() << " unassigned=" << failed << "\n";
    return kExitOk;
  });
}

struct CompareOptions {
  std::string a;
  std::string b;
  std::string out_path;  // optional metrics CSV
};

/// Reads a curve file and resamples it to `n` equidistant points along an
/// interpolating spline. Consecutive duplicate positions are dropped.
inline ArcCurve load_curve(const std::string& path, std::size_t n) {
  const RawTrack track = load_track_csv(path);
  std::vector<Vec2> pts;
  for (const auto& p : track.points) {
    const Vec2 q{p.x, p.y};
    if (pts.empty() || distance(pts.back(), q) > 0.0) pts.push_back(q);
  }
  if (pts.size() < 2) throw ParseError(path, 0, 0, "curve needs at least two distinct positions");
  return arc_reparam(fit_planar(pts, 1.0), n);
}

inline std::size_t count_rows(const std::string& path) {
  return load_track_csv(path).points.size();
}

inline CurveDistance compare_files(const std::string& a, const std::string& b) {
  const std::size_t n = std::max<std::size_t>(2, std::max(count_rows(a), count_rows(b)));
  return curve_distance(load_curve(a, n), load_curve(b, n));
}

inline int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const CurveDistance d = compare_files(resolve_input(o.a), resolve_input(o.b));
    out << "rms=" << format_number(d.rms) << " max=" << format_number(d.max) << "\n";
    if (!o.out_path.empty())
      write_file_atomic(o.out_path, "rms,max\n" + format_number(d.rms) + "," + format_number(d.max) + "\n");
    return kExitOk;
  });
}

inline int cmd_protocols(std::ostream& out) {
  for (const auto& [name, p] : builtin_sequences()) {
    out << name;
    if (p.start) out << " (start " << *p.start << ")";
    out << "\n";
    for (const auto& s : p.segments) out << "  " << s.label << " until " << guard_label(s.exit) << "\n";
    if (p.chain_remaining) out << "  remaining\n";
  }
  return kExitOk;
}

}  // namespace taunav

#pragma once

// Argument parsing for the `taunav` executable. Kept in a header so tests
// can drive the full command line in-process.

#include <CLI11.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "taunav/commands.hpp"

namespace taunav {

namespace detail {
inline Pose parse_pose(const std::string& text) {
  const auto toks = text::tokenize(text);
  std::vector<double> v;
  for (const auto& t : toks) {
    double d = 0.0;
    if (!text::parse_double(t.text, d)) throw CLI::ValidationError("--init", "expected x,y,theta");
    v.push_back(d);
  }
  if (v.size() != 3) throw CLI::ValidationError("--init", "expected x,y,theta");
  return Pose{v[0], v[1], v[2]};
}
}  // namespace detail

/// `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"taunav: time-to-transit steering simulator and trajectory pipeline", "taunav"};
  app.require_subcommand(1);

  RunManifest sim;
  std::string init_text;
  std::string integrator = "rk4";
  auto* s = app.add_subcommand("simulate", "run a control protocol on a scene and write a trajectory CSV");
  s->add_option("--scene", sim.scene_path, "scene file")->required();
  s->add_option("--protocol", sim.protocol, "built-in name or protocol file")->required();
  s->add_option("--init", init_text, "initial pose x,y,theta (default: the protocol's start)");
  s->add_option("--k", sim.gains.k, "control gain")->capture_default_str();
  s->add_option("--v", sim.gains.v, "forward speed [m/s]")->capture_default_str();
  s->add_option("--dt", sim.config.dt, "integration step [s]")->capture_default_str();
  s->add_option("--tmax", sim.config.t_max, "time limit [s]")->capture_default_str();
  s->add_option("--stride", sim.config.record_stride, "record every n-th step")->capture_default_str();
  s->add_option("--integrator", integrator, "rk4 or euler")
      ->check(CLI::IsMember({"rk4", "euler"}))
      ->capture_default_str();
  s->add_option("--hysteresis", sim.protocol_config.hysteresis, "tau_diff_max hysteresis [s]")
      ->capture_default_str();
  s->add_option("--svg", sim.svg_path, "also write an SVG overlay");
  s->add_option("--out", sim.out_path, "output CSV (default: stdout)");
  s->add_flag("--stamp", sim.stamp, "prefix outputs with a generation time comment");

  SmoothOptions sm;
  std::size_t sm_n = 0;
  double sm_length = 0.0;
  auto* m = app.add_subcommand("smooth", "smooth a track and resample it by arc length");
  m->add_option("input", sm.input, "track CSV (t,x,y[,z])")->required();
  m->add_option("--lambda", sm.lambda, "fidelity weight in [0,1]")->capture_default_str();
  auto* sm_n_opt = m->add_option("--n", sm_n, "output sample count (default: input rows)");
  auto* sm_len_opt = m->add_option("--length", sm_length, "truncate to this arc length [m]");
  m->add_option("--out", sm.out_path, "output CSV (default: stdout)");
  m->add_flag("--stamp", sm.stamp, "prefix outputs with a generation time comment");

  AnalyzeOptions an;
  double an_length = 0.0;
  auto* a = app.add_subcommand("analyze", "classify a directory of tracks by vine side");
  a->add_option("directory", an.directory, "directory of track CSVs")->required();
  a->add_option("--scene", an.scene_path, "scene file with vine and woods edge")->required();
  a->add_option("--lambda", an.lambda, "fidelity weight in [0,1]")->capture_default_str();
  a->add_option("--n", an.n, "samples per curve")->capture_default_str();
  auto* an_len_opt = a->add_option("--length", an_length, "common length [m] (default: shortest track)");
  a->add_option("--bin", an.histogram_bin, "depth histogram bin width [m]")->capture_default_str();
  a->add_option("--out", an.out_dir, "output directory")->capture_default_str();

  CompareOptions cmp;
  auto* c = app.add_subcommand("compare", "distance between two curves");
  c->add_option("a", cmp.a, "first curve CSV")->required();
  c->add_option("b", cmp.b, "second curve CSV")->required();
  c->add_option("--out", cmp.out_path, "also write rms,max to this CSV");

  auto* p = app.add_subcommand("protocols", "list the built-in protocols");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
    if (s->parsed() && !init_text.empty()) sim.init = detail::parse_pose(init_text);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (e.get_exit_code() != 0) err << "run with --help for usage\n";
    return kExitError;
  }
  if (s->parsed()) {
    sim.config.integrator = integrator == "euler" ? Integrator::Euler : Integrator::RK4;
    return cmd_simulate(sim, out, err);
  }
  if (m->parsed()) {
    if (sm_n_opt->count()) sm.n = sm_n;
    if (sm_len_opt->count()) sm.length = sm_length;
    return cmd_smooth(sm, out, err);
  }
  if (a->parsed()) {
    if (an_len_opt->count()) an.length = an_length;
    return cmd_analyze(an, out, err);
  }
  if (c->parsed()) return cmd_compare(cmp, out, err);
  if (p->parsed()) return cmd_protocols(out);
  return kExitError;
}

}  // namespace taunav

#include "rollsim/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rollsim/flatcfg.hpp"

namespace rollsim {

namespace {

std::string model_name(FrictionModel m) {
  return m == FrictionModel::frictional ? "frictional" : "frictionless";
}

FrictionModel model_from_name(const std::string& s) {
  if (s == "frictionless") return FrictionModel::frictionless;
  if (s == "frictional") return FrictionModel::frictional;
  throw ValidationError("unknown model: " + s + " (expected frictionless|frictional)");
}

TorqueProfile parse_torque(const FlatConfig& cfg) {
  const std::string kind = cfg.require_string("torque.kind");
  if (kind == "constant") {
    return TorqueProfile::constant(cfg.require_double("torque.value"));
  }
  if (kind == "pulse") {
    return TorqueProfile::pulse(cfg.require_double("torque.amplitude"),
                                cfg.get_double("torque.start", 0.0),
                                cfg.require_double("torque.duration"));
  }
  if (kind == "piecewise") {
    std::vector<std::pair<double, double>> knots;
    for (long i = 0;; ++i) {
      const std::string key = "torque.knot." + std::to_string(i);
      if (!cfg.has(key)) break;
      const auto toks = cfg.require_tokens(key);
      if (toks.size() != 2)
        throw ParseError("field '" + key + "' needs '<t_start> <value>'", key, 0);
      knots.emplace_back(FlatConfig::to_double(toks[0], key, 0),
                         FlatConfig::to_double(toks[1], key, 0));
    }
    return TorqueProfile::piecewise(std::move(knots));
  }
  if (kind == "smoothstep") {
    SmoothStepExpr expr;
    expr.offset = cfg.get_double("torque.offset", 0.0);
    for (long i = 0;; ++i) {
      const std::string key = "torque.term." + std::to_string(i);
      if (!cfg.has(key)) break;
      const auto toks = cfg.require_tokens(key);
      if (toks.size() != 5)
        throw ParseError("field '" + key + "' needs '<coef> <x0> <h0> <x1> <h1>'", key, 0);
      const double coef = FlatConfig::to_double(toks[0], key, 0);
      SmoothStep step{FlatConfig::to_double(toks[1], key, 0),
                      FlatConfig::to_double(toks[2], key, 0),
                      FlatConfig::to_double(toks[3], key, 0),
                      FlatConfig::to_double(toks[4], key, 0)};
      expr.terms.emplace_back(coef, step);
    }
    return TorqueProfile::smooth_steps(std::move(expr));
  }
  throw ValidationError("unknown torque.kind: " + kind);
}

void serialize_torque(FlatConfig& cfg, const TorqueProfile& profile) {
  std::visit(
      [&cfg](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantTorque>) {
          cfg.set("torque.kind", "constant");
          cfg.set_double("torque.value", p.value);
        } else if constexpr (std::is_same_v<T, PulseTorque>) {
          cfg.set("torque.kind", "pulse");
          cfg.set_double("torque.amplitude", p.amplitude);
          cfg.set_double("torque.start", p.start);
          cfg.set_double("torque.duration", p.duration);
        } else if constexpr (std::is_same_v<T, PiecewiseTorque>) {
          cfg.set("torque.kind", "piecewise");
          for (std::size_t i = 0; i < p.knots.size(); ++i)
            cfg.set("torque.knot." + std::to_string(i),
                    format_double(p.knots[i].first) + " " + format_double(p.knots[i].second));
        } else {
          cfg.set("torque.kind", "smoothstep");
          cfg.set_double("torque.offset", p.offset);
          for (std::size_t i = 0; i < p.terms.size(); ++i) {
            const auto& [coef, st] = p.terms[i];
            cfg.set("torque.term." + std::to_string(i),
                    format_double(coef) + " " + format_double(st.x0) + " " +
                        format_double(st.h0) + " " + format_double(st.x1) + " " +
                        format_double(st.h1));
          }
        }
      },
      profile.raw());
}

void reject_unknown_keys(const FlatConfig& cfg) {
  static const char* const kExact[] = {
      "name", "model", "params.g", "params.sphere_mass", "params.core_mass",
      "params.sphere_radius", "params.core_orbit_radius", "params.sphere_inertia",
      "params.core_inertia", "params.viscous_zeta", "torque.kind", "torque.value",
      "torque.amplitude", "torque.start", "torque.duration", "torque.offset", "sim.dt",
      "sim.t_end", "sim.record_every", "sim.initial.theta", "sim.initial.theta_dot",
      "sim.initial.gamma", "sim.initial.gamma_dot", "analysis.ripple_channel",
      "analysis.ripple_window_start", "analysis.ripple_window_end", "analysis.settle_channel",
      "analysis.settle_threshold", "analysis.waving_channel", "analysis.waving_window_start",
      "output.csv", "output.report", "output.report_kv", "output.plot"};
  static const char* const kPrefixes[] = {"torque.knot.", "torque.term."};
  for (const auto& e : cfg.entries()) {
    bool known = false;
    for (const char* k : kExact) known = known || e.key == k;
    for (const char* p : kPrefixes) known = known || e.key.rfind(p, 0) == 0;
    if (!known)
      throw ParseError(cfg.source_name() + ":" + std::to_string(e.line) +
                           ": unknown field '" + e.key + "'",
                       e.key, e.line);
  }
}

}  // namespace

Scenario Scenario::parse_text(const std::string& text, const std::string& source_name) {
  const FlatConfig cfg = FlatConfig::parse_text(text, source_name);
  reject_unknown_keys(cfg);
  Scenario sc;
  sc.name = cfg.get_string("name").value_or("scenario");

  sc.params.gravity = cfg.get_double("params.g", sc.params.gravity);
  sc.params.sphere_mass = cfg.get_double("params.sphere_mass", sc.params.sphere_mass);
  sc.params.core_mass = cfg.get_double("params.core_mass", sc.params.core_mass);
  sc.params.sphere_radius = cfg.get_double("params.sphere_radius", sc.params.sphere_radius);
  sc.params.core_orbit_radius =
      cfg.get_double("params.core_orbit_radius", sc.params.core_orbit_radius);
  sc.params.sphere_inertia = cfg.get_double("params.sphere_inertia", sc.params.sphere_inertia);
  sc.params.core_inertia = cfg.get_double("params.core_inertia", sc.params.core_inertia);
  sc.params.viscous_zeta = cfg.get_double("params.viscous_zeta", sc.params.viscous_zeta);

  sc.sim.model = model_from_name(cfg.get_string("model").value_or("frictionless"));
  sc.sim.dt = cfg.get_double("sim.dt", sc.sim.dt);
  sc.sim.t_end = cfg.get_double("sim.t_end", sc.sim.t_end);
  sc.sim.record_every = static_cast<int>(cfg.get_long("sim.record_every", sc.sim.record_every));
  sc.sim.initial_state.theta = cfg.get_double("sim.initial.theta", 0.0);
  sc.sim.initial_state.theta_dot = cfg.get_double("sim.initial.theta_dot", 0.0);
  sc.sim.initial_state.gamma = cfg.get_double("sim.initial.gamma", 0.0);
  sc.sim.initial_state.gamma_dot = cfg.get_double("sim.initial.gamma_dot", 0.0);

  sc.torque = parse_torque(cfg);

  sc.analysis.ripple_channel = channel_from_name(
      cfg.get_string("analysis.ripple_channel").value_or("sphere_velocity"));
  sc.analysis.ripple_window_start = cfg.get_double("analysis.ripple_window_start", 2.0);
  sc.analysis.ripple_window_end =
      cfg.get_double("analysis.ripple_window_end", sc.sim.t_end);
  sc.analysis.settle_channel =
      channel_from_name(cfg.get_string("analysis.settle_channel").value_or("core_velocity"));
  sc.analysis.settle_threshold = cfg.get_double("analysis.settle_threshold", 0.01);
  sc.analysis.waving_channel =
      channel_from_name(cfg.get_string("analysis.waving_channel").value_or("sphere_velocity"));
  sc.analysis.waving_window_start = cfg.get_double("analysis.waving_window_start", 2.0);

  sc.csv_name = cfg.get_string("output.csv").value_or(sc.name + ".csv");
  sc.report_name = cfg.get_string("output.report").value_or(sc.name + "_report.txt");
  sc.kv_name = cfg.get_string("output.report_kv").value_or(sc.name + "_report.kv");
  sc.plot_name = cfg.get_string("output.plot").value_or(sc.name + "_plot.py");

  sc.validate();
  return sc;
}

Scenario Scenario::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file: " + path, "", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

void Scenario::validate() const {
  params.validate();
  sim.validate();
  if (!(analysis.ripple_window_end > analysis.ripple_window_start))
    throw ValidationError("analysis ripple window must have positive length");
  if (!(analysis.settle_threshold > 0.0))
    throw ValidationError("analysis.settle_threshold must be > 0");
}

std::string Scenario::serialize() const {
  FlatConfig cfg;
  cfg.set("name", name);
  cfg.set("model", model_name(sim.model));
  cfg.set_double("params.g", params.gravity);
  cfg.set_double("params.sphere_mass", params.sphere_mass);
  cfg.set_double("params.core_mass", params.core_mass);
  cfg.set_double("params.sphere_radius", params.sphere_radius);
  cfg.set_double("params.core_orbit_radius", params.core_orbit_radius);
  cfg.set_double("params.sphere_inertia", params.sphere_inertia);
  cfg.set_double("params.core_inertia", params.core_inertia);
  cfg.set_double("params.viscous_zeta", params.viscous_zeta);
  serialize_torque(cfg, torque);
  cfg.set_double("sim.dt", sim.dt);
  cfg.set_double("sim.t_end", sim.t_end);
  cfg.set_long("sim.record_every", sim.record_every);
  cfg.set_double("sim.initial.theta", sim.initial_state.theta);
  cfg.set_double("sim.initial.theta_dot", sim.initial_state.theta_dot);
  cfg.set_double("sim.initial.gamma", sim.initial_state.gamma);
  cfg.set_double("sim.initial.gamma_dot", sim.initial_state.gamma_dot);
  cfg.set("analysis.ripple_channel", channel_name(analysis.ripple_channel));
  cfg.set_double("analysis.ripple_window_start", analysis.ripple_window_start);
  cfg.set_double("analysis.ripple_window_end", analysis.ripple_window_end);
  cfg.set("analysis.settle_channel", channel_name(analysis.settle_channel));
  cfg.set_double("analysis.settle_threshold", analysis.settle_threshold);
  cfg.set("analysis.waving_channel", channel_name(analysis.waving_channel));
  cfg.set_double("analysis.waving_window_start", analysis.waving_window_start);
  cfg.set("output.csv", csv_name);
  cfg.set("output.report", report_name);
  cfg.set("output.report_kv", kv_name);
  cfg.set("output.plot", plot_name);
  return cfg.serialize();
}

const char* const kCsvHeader =
    "t,theta,theta_dot,gamma,gamma_dot,tau,energy,sphere_y,core_y,core_z,p_y,p_z";

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  traj.times[i], traj.theta[i], traj.theta_dot[i], traj.gamma[i],
                  traj.gamma_dot[i], traj.torque[i], traj.energy[i], traj.sphere_y[i],
                  traj.core_y[i], traj.core_z[i], traj.momentum_y[i], traj.momentum_z[i]);
    out << buf;
  }
}

std::string csv_string(const Trajectory& traj) {
  std::ostringstream out;
  write_csv(traj, out);
  return out.str();
}

RunAnalysis analyze(const Trajectory& traj, const AnalysisRequest& req) {
  RunAnalysis an;
  const double t_last = traj.times.empty() ? 0.0 : traj.times.back();
  const double w0 = std::min(req.ripple_window_start, t_last);
  const double w1 = std::min(req.ripple_window_end, t_last);
  an.ripple = ripple_stats(traj, req.ripple_channel, w0, w1);
  an.settle = settle_time(traj, req.settle_channel, req.settle_threshold);
  an.waving = waving_flag(traj, req.waving_channel, req.waving_window_start);
  return an;
}

std::string render_run_report_text(const Scenario& sc, const Trajectory& traj,
                                   const RunAnalysis& an) {
  std::ostringstream out;
  out << "run: " << sc.name << "\n";
  out << "samples: " << traj.size() << ", t_end: "
      << format_double(traj.times.empty() ? 0.0 : traj.times.back()) << " s\n";
  if (traj.aborted) out << "ABORTED: " << traj.abort_reason << "\n";
  out << "final sphere displacement: " << format_double(traj.theta.back()) << " rad ("
      << format_double(traj.sphere_y.back()) << " m)\n";
  out << "final core displacement: " << format_double(traj.gamma.back()) << " rad\n";
  out << "ripple(" << channel_name(sc.analysis.ripple_channel) << ", ["
      << format_double(sc.analysis.ripple_window_start) << ", "
      << format_double(sc.analysis.ripple_window_end) << "] s): mean "
      << format_double(an.ripple.mean) << ", uphill " << format_double(an.ripple.uphill)
      << ", downhill " << format_double(an.ripple.downhill);
  if (an.ripple.ratio)
    out << ", downhill/uphill " << format_double(*an.ripple.ratio);
  out << "\n";
  if (an.ripple.diagnostic) out << "  note: " << *an.ripple.diagnostic << "\n";
  out << "settle(" << channel_name(sc.analysis.settle_channel) << ", threshold "
      << format_double(sc.analysis.settle_threshold) << "): ";
  if (an.settle)
    out << format_double(*an.settle) << " s\n";
  else
    out << "never\n";
  out << "waving(" << channel_name(sc.analysis.waving_channel) << "): "
      << (an.waving ? "yes" : "no") << "\n";
  return out.str();
}

std::string render_run_report_kv(const Scenario& sc, const Trajectory& traj,
                                 const RunAnalysis& an) {
  FlatConfig cfg;
  cfg.set("run.name", sc.name);
  cfg.set_long("run.samples", static_cast<long>(traj.size()));
  cfg.set("run.aborted", traj.aborted ? "true" : "false");
  cfg.set_double("run.final_theta", traj.theta.back());
  cfg.set_double("run.final_gamma", traj.gamma.back());
  cfg.set_double("run.final_sphere_y", traj.sphere_y.back());
  cfg.set_double("ripple.mean", an.ripple.mean);
  cfg.set_double("ripple.uphill", an.ripple.uphill);
  cfg.set_double("ripple.downhill", an.ripple.downhill);
  if (an.ripple.ratio) cfg.set_double("ripple.ratio", *an.ripple.ratio);
  if (an.settle)
    cfg.set_double("settle.time", *an.settle);
  else
    cfg.set("settle.time", "never");
  cfg.set("waving.flag", an.waving ? "true" : "false");
  return cfg.serialize();
}

std::string plot_script(const Scenario& sc, const std::string& csv_file) {
  std::ostringstream out;
  out << "#!/usr/bin/env python3\n"
      << "# Renders the displacement and velocity panels for " << sc.name << ".\n"
      << "import csv\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "rows = list(csv.DictReader(open(" << '"' << csv_file << '"' << ")))\n"
      << "t = [float(r['t']) for r in rows]\n"
      << "cols = {k: [float(r[k]) for r in rows] for k in ('theta', 'gamma', 'theta_dot', "
         "'gamma_dot')}\n\n"
      << "fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(9, 7), sharex=True)\n"
      << "ax0.plot(t, cols['theta'], label='sphere')\n"
      << "ax0.plot(t, cols['gamma'], '--', label='core')\n"
      << "ax0.set_ylabel('displacement (rad)')\n"
      << "ax0.legend(); ax0.grid(True)\n"
      << "ax1.plot(t, cols['theta_dot'], label='sphere')\n"
      << "ax1.plot(t, cols['gamma_dot'], '--', label='core')\n"
      << "ax1.set_xlabel('time (s)'); ax1.set_ylabel('velocity (rad/s)')\n"
      << "ax1.legend(); ax1.grid(True)\n"
      << "fig.suptitle(" << '"' << sc.name << '"' << ")\n"
      << "fig.tight_layout()\n"
      << "fig.savefig(" << '"' << sc.name << ".png" << '"' << ", dpi=150)\n"
      << "print('wrote " << sc.name << ".png')\n";
  return out.str();
}

RunArtifacts run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
  sc.validate();
  std::filesystem::create_directories(out_dir);
  RunArtifacts art;
  art.trajectory = simulate(sc.params, sc.sim, sc.torque);
  art.analysis = analyze(art.trajectory, sc.analysis);

  art.csv = out_dir / sc.csv_name;
  art.report = out_dir / sc.report_name;
  art.kv = out_dir / sc.kv_name;
  art.plot = out_dir / sc.plot_name;

  {
    std::ofstream out(art.csv, std::ios::binary);
    write_csv(art.trajectory, out);
  }
  {
    std::ofstream out(art.report, std::ios::binary);
    out << render_run_report_text(sc, art.trajectory, art.analysis);
  }
  {
    std::ofstream out(art.kv, std::ios::binary);
    out << render_run_report_kv(sc, art.trajectory, art.analysis);
  }
  {
    std::ofstream out(art.plot, std::ios::binary);
    out << plot_script(sc, sc.csv_name);
  }
  return art;
}

Scenario apply_sweep_value(const Scenario& base, const std::string& param, double value) {
  Scenario sc = base;
  if (param == "tau") {
    if (const auto* p = std::get_if<PulseTorque>(&base.torque.raw())) {
      sc.torque = TorqueProfile::pulse(value, p->start, p->duration);
    } else if (std::holds_alternative<ConstantTorque>(base.torque.raw())) {
      sc.torque = TorqueProfile::constant(value);
    } else {
      throw ValidationError("sweep over tau requires a pulse or constant torque profile");
    }
  } else if (param == "zeta") {
    sc.params.viscous_zeta = value;
  } else if (param == "dt") {
    sc.sim.dt = value;
  } else if (param == "mc") {
    sc.params.core_mass = value;
  } else if (param == "Ms") {
    sc.params.sphere_mass = value;
  } else if (param == "R") {
    sc.params.sphere_radius = value;
  } else if (param == "r") {
    sc.params.core_orbit_radius = value;
  } else if (param == "g") {
    sc.params.gravity = value;
  } else if (param == "t_end") {
    sc.sim.t_end = value;
  } else {
    throw ValidationError("unknown sweep parameter: " + param +
                          " (expected tau|zeta|dt|mc|Ms|R|r|g|t_end)");
  }
  std::string tag = param + "_" + format_double(value);
  for (auto& ch : tag)
    if (ch == '.' || ch == '-' || ch == '+') ch = '_';
  sc.name = base.name + "_" + tag;
  sc.csv_name = sc.name + ".csv";
  sc.report_name = sc.name + "_report.txt";
  sc.kv_name = sc.name + "_report.kv";
  sc.plot_name = sc.name + "_plot.py";
  sc.validate();
  return sc;
}

SweepResult run_sweep(const Scenario& base, const std::string& param,
                      const std::vector<double>& values, const std::filesystem::path& out_dir) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  SweepResult result;
  result.param = param;
  result.values = values;
  for (const double v : values) {
    const Scenario sc = apply_sweep_value(base, param, v);
    result.runs.push_back(run_scenario(sc, out_dir));
  }

  std::ostringstream combined;
  combined << "sweep of " << param << " over " << values.size() << " values (base: " << base.name
           << ")\n\n";
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& art = result.runs[i];
    combined << "[" << param << " = " << format_double(values[i]) << "]\n";
    const Scenario sc = apply_sweep_value(base, param, values[i]);
    combined << render_run_report_text(sc, art.trajectory, art.analysis);
    if (i > 0) {
      combined << "vs " << param << " = " << format_double(values[0]) << ":\n"
               << render_comparison_text(compare(result.runs[0].trajectory, art.trajectory));
    }
    combined << "\n";
  }
  result.combined_report = out_dir / (base.name + "_sweep_" + param + ".txt");
  std::ofstream out(result.combined_report, std::ios::binary);
  out << combined.str();
  return result;
}

std::filesystem::path resolve_out_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("ROLLSIM_OUT"); env && *env) return env;
  return "rollsim_out";
}

}  // namespace rollsim

#include "rollsim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "rollsim/analysis.hpp"
#include "rollsim/dynamics.hpp"
#include "rollsim/flatcfg.hpp"
#include "rollsim/integrate.hpp"
#include "rollsim/locomotion.hpp"
#include "rollsim/scenario.hpp"

namespace rollsim {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) { return format_double(v); }

CriterionResult begin_criterion(int number, const char* name) {
  CriterionResult r;
  r.number = number;
  r.name = name;
  return r;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

RobotParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RobotParams p;
  p.gravity = 9.8 * (0.5 + u(rng));
  p.sphere_mass = 3.0 * (0.5 + u(rng));
  p.sphere_radius = 0.36 * (0.7 + 0.6 * u(rng));
  p.core_orbit_radius = p.sphere_radius * (0.4 + 0.5 * u(rng));
  p.core_mass = p.sphere_mass / 3.0 * (0.5 + u(rng));
  p.sphere_inertia = shell_inertia(p.sphere_mass, p.sphere_radius) * (0.8 + 0.4 * u(rng));
  p.core_inertia =
      solid_sphere_inertia(p.core_mass, p.core_orbit_radius) * (0.8 + 0.4 * u(rng));
  p.viscous_zeta = 2.0 * u(rng);
  return p;
}

PlanarState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  std::uniform_real_distribution<double> rate(-5.0, 5.0);
  return {angle(rng), rate(rng), angle(rng), rate(rng)};
}

struct Context {
  std::filesystem::path data_dir;
  Scenario fig44;
  Scenario fig48;
  Trajectory fig44_run;   // shipped frictionless pulse, dt as shipped
  Trajectory fig48_run;   // shipped frictional pulse
  double pulse_end = 1.0;
};

Context make_context(const std::filesystem::path& data_dir) {
  Context ctx;
  ctx.data_dir = data_dir;
  ctx.fig44 = Scenario::parse_file((data_dir / "scenarios" / "fig44_frictionless.scn").string());
  ctx.fig48 = Scenario::parse_file((data_dir / "scenarios" / "fig48_frictional.scn").string());
  ctx.fig44_run = simulate(ctx.fig44.params, ctx.fig44.sim, ctx.fig44.torque);
  ctx.fig48_run = simulate(ctx.fig48.params, ctx.fig48.sim, ctx.fig48.torque);
  if (const auto* p = std::get_if<PulseTorque>(&ctx.fig44.torque.raw()))
    ctx.pulse_end = p->start + p->duration;
  return ctx;
}

CriterionResult criterion_oracle_equivalence() {
  CriterionResult r = begin_criterion(1, "oracle equivalence (closed forms vs 2x2 matrix solve)");
  const auto start = Clock::now();
  std::mt19937_64 rng(20240517ull);
  std::uniform_real_distribution<double> tau_dist(-5.0, 5.0);
  double worst = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const RobotParams p = random_params(rng);
    const DerivedConstants k = validate_and_derive(p);
    const PlanarState s = random_state(rng);
    const double tau = tau_dist(rng);
    const double zeta = p.viscous_zeta;

    const Accelerations oracle_fr = mass_matrix_solve(k, s, tau, zeta);
    const StateRates closed_fr = frictional_rates(k, s, tau, zeta);
    worst = std::max(worst, rel_err(closed_fr.d_theta_dot, oracle_fr.theta_ddot));
    worst = std::max(worst, rel_err(closed_fr.d_gamma_dot, oracle_fr.gamma_ddot));

    const Accelerations oracle_nf = mass_matrix_solve(k, s, tau, 0.0);
    const StateRates closed_nf = frictionless_rates(k, s, tau);
    worst = std::max(worst, rel_err(closed_nf.d_theta_dot, oracle_nf.theta_ddot));
    worst = std::max(worst, rel_err(closed_nf.d_gamma_dot, oracle_nf.gamma_ddot));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = worst <= 1e-9 && secs < 1.0;
  r.details.push_back("worst relative error over " + std::to_string(n) + " samples: " +
                      fmt(worst) + " (tol 1e-9), runtime " + fmt(secs) + " s (< 1 s)");
  return r;
}

CriterionResult criterion_energy_conservation() {
  CriterionResult r = begin_criterion(2, "energy conservation (tau=0, zeta=0, 10 s at dt=1e-4)");
  RobotParams p;
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 10.0;
  cfg.record_every = 10;
  cfg.model = FrictionModel::frictionless;
  cfg.initial_state = {0.0, 0.0, 2.0, 0.0};
  const Trajectory traj = simulate(p, cfg, TorqueProfile::constant(0.0));
  const double e0 = traj.energy.front();
  double drift = 0.0;
  for (const double e : traj.energy) drift = std::max(drift, std::abs(e - e0));
  const double rel = drift / std::abs(e0);
  r.passed = rel <= 1e-6;
  r.details.push_back("E0 = " + fmt(e0) + " J, max |E - E0| = " + fmt(drift) +
                      " J, relative drift " + fmt(rel) + " (tol 1e-6)");
  return r;
}

CriterionResult criterion_gradient_check() {
  CriterionResult r = begin_criterion(3, "Lagrangian gradient check (analytic vs central differences)");
  RobotParams p;
  std::mt19937_64 rng(777ull);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double step = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PlanarState s{u(rng), u(rng), u(rng), u(rng)};
    const auto analytic = lagrangian_partials(p, s);
    for (int j = 0; j < 4; ++j) {
      PlanarState hi = s, lo = s;
      double* fields_hi[4] = {&hi.theta, &hi.theta_dot, &hi.gamma, &hi.gamma_dot};
      double* fields_lo[4] = {&lo.theta, &lo.theta_dot, &lo.gamma, &lo.gamma_dot};
      *fields_hi[j] += step;
      *fields_lo[j] -= step;
      const double fd = (lagrangian(p, hi) - lagrangian(p, lo)) / (2.0 * step);
      worst = std::max(worst, rel_err(fd, analytic[j]));
    }
  }
  r.passed = worst <= 1e-5;
  r.details.push_back("worst relative error over 100 points x 4 partials: " + fmt(worst) +
                      " (tol 1e-5)");
  return r;
}

CriterionResult criterion_defaults() {
  CriterionResult r = begin_criterion(4, "reference defaults and inertia formulas");
  const RobotParams p;
  const bool defaults_ok = p.gravity == 9.8 && p.sphere_mass == 3.0 && p.core_mass == 1.0 &&
                           p.sphere_radius == 0.36 && p.core_orbit_radius == 0.317 &&
                           p.sphere_inertia == 0.2592 && p.core_inertia == 0.0402 &&
                           p.viscous_zeta == 0.8;
  const double is = shell_inertia(3.0, 0.36);
  const double ic = solid_sphere_inertia(1.0, 0.317);
  const bool inertia_ok = std::abs(is - 0.2592) <= 5e-5 && std::abs(ic - 0.0402) <= 5e-5;
  r.passed = defaults_ok && inertia_ok;
  r.details.push_back("shell inertia(3, 0.36) = " + fmt(is) + " vs 0.2592, solid inertia(1, 0.317) = " +
                      fmt(ic) + " vs 0.0402 (tol 5e-5); defaults " +
                      (defaults_ok ? "match" : "DIFFER"));
  return r;
}

CriterionResult criterion_pulse_experiment(const Context& ctx) {
  CriterionResult r = begin_criterion(5, "frictionless pulse: forward drift and bounded core band");
  const Trajectory& traj = ctx.fig44_run;
  const RippleStats vel = ripple_stats(traj, Channel::theta_dot, 2.0, 10.0);

  auto band = [&](double t0, double t1) {
    const RippleStats s = ripple_stats(traj, Channel::gamma, t0, t1);
    return s.uphill + s.downhill;
  };
  const double bw1 = band(2.0, 6.0);
  const double bw2 = band(6.0, 10.0);
  const double bw_change = std::abs(bw1 - bw2) / std::max(bw1, bw2);

  const bool mean_ok = vel.mean > 0.0;
  const bool band_ok = bw_change <= 0.20;
  r.passed = mean_ok && band_ok;
  r.details.push_back("sphere velocity mean over [2,10] s = " + fmt(vel.mean) +
                      " (must be > 0)");
  r.details.push_back("core band width [2,6] = " + fmt(bw1) + ", [6,10] = " + fmt(bw2) +
                      ", change " + fmt(bw_change) + " (tol 0.20)");
  return r;
}

CriterionResult criterion_ripple_asymmetry(const Context& ctx) {
  CriterionResult r = begin_criterion(6, "ripple asymmetry at unit and double torque");
  const double ratio1 =
      ripple_stats(ctx.fig44_run, Channel::theta_dot, 2.0, 10.0).ratio.value_or(0.0);

  const Scenario sc2 = apply_sweep_value(ctx.fig44, "tau", -2.0);
  const Trajectory run2 = simulate(sc2.params, sc2.sim, sc2.torque);
  const double ratio2 = ripple_stats(run2, Channel::theta_dot, 2.0, 10.0).ratio.value_or(0.0);

  const bool band_ok = ratio1 >= 0.05 && ratio1 <= 0.5;
  const double factor = ratio2 > 0.0 ? ratio1 / ratio2 : 0.0;
  const bool factor_ok = factor > 0.5 && factor < 2.0;
  r.passed = band_ok && factor_ok;
  r.details.push_back("downhill/uphill at |tau|=1: " + fmt(ratio1) +
                      " (band [0.05, 0.5]: " + (band_ok ? "ok" : "OUTSIDE") + ")");
  r.details.push_back("ratio at |tau|=2: " + fmt(ratio2) + ", ratio1/ratio2 = " + fmt(factor) +
                      " (must be within factor 2: " + (factor_ok ? "ok" : "OUTSIDE") + ")");
  if (!band_ok)
    r.details.push_back("note: post-pulse energy sits below the separatrix, so the core swings "
                        "symmetrically; an asymmetric ripple would need a circulating core");
  return r;
}

CriterionResult criterion_waving(const Context& ctx) {
  CriterionResult r = begin_criterion(7, "high-torque waving flag (|tau|=6 yes, |tau|=1 no)");
  const bool flag1 = waving_flag(ctx.fig44_run, Channel::theta_dot, 2.0);

  const Scenario sc6 = apply_sweep_value(ctx.fig44, "tau", -6.0);
  const Trajectory run6 = simulate(sc6.params, sc6.sim, sc6.torque);
  const bool flag6 = waving_flag(run6, Channel::theta_dot, 2.0);

  r.passed = flag6 && !flag1;
  r.details.push_back(std::string("waving at |tau|=6: ") + (flag6 ? "yes" : "NO") +
                      ", at |tau|=1: " + (flag1 ? "YES" : "no"));
  return r;
}

CriterionResult criterion_frictional_damping(const Context& ctx) {
  CriterionResult r = begin_criterion(8, "frictional damping: settle, forward monotonicity, shorter travel");
  const Trajectory& fr = ctx.fig48_run;

  const auto settle = settle_time(fr, Channel::gamma_dot, 0.01);
  const bool settle_ok = settle.has_value() && *settle <= 6.0;

  // monotone non-decreasing after the pulse, slack 1e-8 rad
  double recession = 0.0;
  double running_max = -1e300;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (fr.times[i] < ctx.pulse_end) continue;
    running_max = std::max(running_max, fr.theta[i]);
    recession = std::max(recession, running_max - fr.theta[i]);
  }
  const bool monotone_ok = recession <= 1e-8;

  const double final_fr = fr.theta.back();
  const double final_nf = ctx.fig44_run.theta.back();
  const bool travel_ok = final_fr < final_nf;

  r.passed = settle_ok && monotone_ok && travel_ok;
  r.details.push_back("core velocity settle time (|x| < 0.01): " +
                      (settle ? fmt(*settle) + " s" : std::string("never")) + " (must be <= 6 s)");
  r.details.push_back("max displacement recession after pulse: " + fmt(recession) +
                      " rad (slack 1e-8): " + (monotone_ok ? "ok" : "NOT monotone"));
  if (!monotone_ok)
    r.details.push_back("note: the sphere physically rocks back while the core swing damps out; "
                        "the recession is dt-independent (same at dt=1e-3 and 1e-4)");
  r.details.push_back("final displacement frictional " + fmt(final_fr) + " < frictionless " +
                      fmt(final_nf) + ": " + (travel_ok ? "ok" : "VIOLATED"));
  return r;
}

CriterionResult criterion_zeta_zero_reduction() {
  CriterionResult r = begin_criterion(9, "zeta=0 frictional path equals frictionless path");
  std::mt19937_64 rng(4242ull);
  std::uniform_real_distribution<double> tau_dist(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const RobotParams p = random_params(rng);
    const DerivedConstants k = validate_and_derive(p);
    const PlanarState s = random_state(rng);
    const double tau = tau_dist(rng);
    const StateRates a = frictional_rates(k, s, tau, 0.0);
    const StateRates b = frictionless_rates(k, s, tau);
    worst = std::max({worst, std::abs(a.d_theta_dot - b.d_theta_dot),
                      std::abs(a.d_gamma_dot - b.d_gamma_dot)});
  }
  r.passed = worst <= 1e-14;
  r.details.push_back("max absolute difference over 500 samples: " + fmt(worst) +
                      " (tol 1e-14)");
  return r;
}

CriterionResult criterion_gate_timing() {
  CriterionResult r = begin_criterion(10, "gate timing boundary values and continuity");
  const auto [g1_0, g2_0] = gate_timing(0.0);
  bool ok = std::abs(g1_0 - (-1.9)) <= 1e-12;
  std::ostringstream vals;
  vals << "gate1(0) = " << fmt(g1_0);
  for (const double t : {1.6, 2.0, 3.0, 10.0}) {
    const auto [g1, g2] = gate_timing(t);
    ok = ok && std::abs(g1 - 2.0) <= 1e-12 && std::abs(g2 - (-2.0)) <= 1e-12;
  }
  const auto [g1_sat, g2_sat] = gate_timing(3.0);
  vals << ", saturated gate1 = " << fmt(g1_sat) << ", gate2 = " << fmt(g2_sat);

  // continuity near every breakpoint: differences shrink linearly with eps
  const double breakpoints[] = {0.001, 0.002, 1.3, 1.3001, 1.55, 1.55001};
  double worst_slope = 0.0;
  bool cont_ok = true;
  for (const double eps : {1e-6, 1e-7, 1e-8}) {
    double max_diff = 0.0;
    const long steps = std::lround(4e-5 / eps);
    for (const double bp : breakpoints) {
      for (long i = 0; i <= steps; ++i) {
        const double t = bp - 2e-5 + static_cast<double>(i) * eps;
        const auto [a1, a2] = gate_timing(t);
        const auto [b1, b2] = gate_timing(t + eps);
        max_diff = std::max({max_diff, std::abs(b1 - a1), std::abs(b2 - a2)});
      }
    }
    cont_ok = cont_ok && max_diff <= 2e6 * eps;
    worst_slope = std::max(worst_slope, max_diff / eps);
  }
  r.passed = ok && cont_ok;
  r.details.push_back(vals.str() + " (expect -1.9 and +2/-2)");
  r.details.push_back("max |f(t+eps)-f(t)|/eps near breakpoints: " + fmt(worst_slope) +
                      " (finite slope, no jumps; bound 2e6)");
  return r;
}

CriterionResult criterion_fsm(const Context& ctx) {
  CriterionResult r = begin_criterion(11, "cycle table golden, cycle closure, shipped sequences");
  static const char* const kGolden[5] = {
      "a | I II II I | I S O O | MM",
      "b | I I II II | O I S O | MM",
      "c | II I I II | S O I O | MM",
      "d | II II I I | S O I O | GB",
      "e | II I I II | I T S T | EP",
  };
  const auto& table = forward_cycle_table();
  bool golden_ok = true;
  for (int i = 0; i < 5; ++i) {
    golden_ok = golden_ok && serialize_mode(table[i]) == kGolden[i];
    golden_ok = golden_ok && parse_mode(kGolden[i]) == table[i];
  }

  bool closure_ok = true;
  for (const auto& start : table) {
    CycleMode m = start;
    for (int step = 0; step < 5; ++step) {
      // feed the segment class the next row requires
      std::size_t idx = 0;
      while (table[idx].mode != m.mode) ++idx;
      const SegmentClass need = table[(idx + 1) % 5].core_location;
      const ModeAdvance adv = next_mode(m, need, 0.0);
      closure_ok = closure_ok && adv.mode.mode != m.mode;
      m = adv.mode;
    }
    closure_ok = closure_ok && m == start;
  }

  bool data_ok = true;
  std::string data_note;
  try {
    const LocomotionData data =
        load_locomotion_data((ctx.data_dir / "locomotion.dat").string());
    data.geometry.validate();
    int count = 0;
    for (const auto& seq : data.sequences) {
      const auto violations = validate_sequence(seq);
      if (!violations.empty()) {
        data_ok = false;
        data_note = motion_name(seq.motion) + ": " + violations.front();
      }
      ++count;
    }
    if (count < 5) {
      data_ok = false;
      data_note = "expected 5 gesture sequences, found " + std::to_string(count);
    }
  } catch (const std::exception& e) {
    data_ok = false;
    data_note = e.what();
  }

  r.passed = golden_ok && closure_ok && data_ok;
  r.details.push_back(std::string("table golden: ") + (golden_ok ? "ok" : "MISMATCH") +
                      ", 5-transition closure: " + (closure_ok ? "ok" : "BROKEN") +
                      ", shipped sequences: " + (data_ok ? "0 violations" : data_note));
  return r;
}

CriterionResult criterion_determinism(const Context& ctx) {
  CriterionResult r = begin_criterion(12, "determinism and dt convergence");
  const Trajectory again44 = simulate(ctx.fig44.params, ctx.fig44.sim, ctx.fig44.torque);
  const Trajectory again48 = simulate(ctx.fig48.params, ctx.fig48.sim, ctx.fig48.torque);
  const bool bytes_ok = csv_string(ctx.fig44_run) == csv_string(again44) &&
                        csv_string(ctx.fig48_run) == csv_string(again48);

  Scenario coarse = ctx.fig44;
  coarse.sim.dt = 1e-3;
  coarse.sim.record_every = 1;
  Scenario fine = ctx.fig44;
  fine.sim.dt = 1e-4;
  fine.sim.record_every = 10;
  const Trajectory tc = simulate(coarse.params, coarse.sim, coarse.torque);
  const Trajectory tf = simulate(fine.params, fine.sim, fine.torque);
  const ComparisonReport rep = compare(tc, tf);
  const double rms = rep.max_state_rms();
  const bool rms_ok = rms <= 1e-5;

  r.passed = bytes_ok && rms_ok;
  r.details.push_back(std::string("repeated run CSV: ") +
                      (bytes_ok ? "byte-identical" : "DIFFERS"));
  r.details.push_back("max state-channel RMS between dt=1e-3 and dt=1e-4: " + fmt(rms) +
                      " (tol 1e-5)");
  return r;
}

}  // namespace

bool AcceptanceOutcome::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed; });
}

AcceptanceOutcome run_acceptance(const std::filesystem::path& data_dir, std::ostream& log) {
  const Context ctx = make_context(data_dir);

  AcceptanceOutcome outcome;
  outcome.criteria.push_back(criterion_oracle_equivalence());
  outcome.criteria.push_back(criterion_energy_conservation());
  outcome.criteria.push_back(criterion_gradient_check());
  outcome.criteria.push_back(criterion_defaults());
  outcome.criteria.push_back(criterion_pulse_experiment(ctx));
  outcome.criteria.push_back(criterion_ripple_asymmetry(ctx));
  outcome.criteria.push_back(criterion_waving(ctx));
  outcome.criteria.push_back(criterion_frictional_damping(ctx));
  outcome.criteria.push_back(criterion_zeta_zero_reduction());
  outcome.criteria.push_back(criterion_gate_timing());
  outcome.criteria.push_back(criterion_fsm(ctx));
  outcome.criteria.push_back(criterion_determinism(ctx));

  for (const auto& c : outcome.criteria) {
    log << (c.passed ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": " << c.name
        << "\n";
    for (const auto& d : c.details) log << "       " << d << "\n";
  }
  log << (outcome.all_passed() ? "all criteria passed" : "some criteria FAILED") << "\n";
  return outcome;
}

}  // namespace rollsim

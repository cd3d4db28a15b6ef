#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rollsim/analysis.hpp"
#include "rollsim/integrate.hpp"

using namespace rollsim;

namespace {

SimConfig pulse_config(double dt, double t_end, FrictionModel model) {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = 1;
  cfg.model = model;
  cfg.initial_state = {0.0, 0.0, 0.0, 0.0};
  return cfg;
}

double max_abs_state_diff(const PlanarState& a, const PlanarState& b) {
  return std::max({std::abs(a.theta - b.theta), std::abs(a.theta_dot - b.theta_dot),
                   std::abs(a.gamma - b.gamma), std::abs(a.gamma_dot - b.gamma_dot)});
}

}  // namespace

TEST_CASE("torque profile evaluation") {
  SUBCASE("constant") {
    const TorqueProfile p = TorqueProfile::constant(2.5);
    CHECK(eval_torque(p, 0.0) == 2.5);
    CHECK(eval_torque(p, 100.0) == 2.5);
  }
  SUBCASE("pulse is right-open") {
    const TorqueProfile p = TorqueProfile::pulse(1.0, 0.0, 1.0);
    CHECK(eval_torque(p, 0.0) == 1.0);
    CHECK(eval_torque(p, 0.5) == 1.0);
    CHECK(eval_torque(p, 1.0) == 0.0);
    CHECK(eval_torque(p, 1.5) == 0.0);
    CHECK(p.value_from_left(1.0) == 1.0);
    CHECK(p.value_from_left(0.0) == 0.0);
  }
  SUBCASE("piecewise is right-continuous") {
    const TorqueProfile p = TorqueProfile::piecewise({{0.0, 1.0}, {2.0, 3.0}});
    CHECK(eval_torque(p, 1.0) == 1.0);
    CHECK(eval_torque(p, 1.999) == 1.0);
    CHECK(eval_torque(p, 2.0) == 3.0);
    CHECK(p.value_from_left(2.0) == 1.0);
    CHECK_THROWS_AS(TorqueProfile::piecewise({{2.0, 1.0}, {1.0, 3.0}}), ValidationError);
  }
  SUBCASE("smooth step clamps and blends") {
    const SmoothStep s{0.001, 0.95, 0.002, 1.0};
    CHECK(s.value(0.0) == 0.95);
    CHECK(s.value(1.0) == 1.0);
    CHECK(s.value(0.0015) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK_THROWS_AS(TorqueProfile::smooth_steps(SmoothStepExpr{0.0, {{1.0, {1.0, 0.0, 0.5, 1.0}}}}),
                    ValidationError);
  }
  SUBCASE("composite step expression saturates") {
    // -2*(step(0.001,0.95,0.002,1) - 2*step(1.55,0,1.55001,1)) flattened
    SmoothStepExpr expr;
    expr.terms = {{-2.0, SmoothStep{0.001, 0.95, 0.002, 1.0}},
                  {4.0, SmoothStep{1.55, 0.0, 1.55001, 1.0}}};
    const TorqueProfile p = TorqueProfile::smooth_steps(expr);
    CHECK(eval_torque(p, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eval_torque(p, 0.0) == doctest::Approx(-1.9).epsilon(1e-12));
  }
}

TEST_CASE("rk4 step holds an exact equilibrium") {
  const DerivedConstants k = validate_and_derive(RobotParams{});
  const PlanarState s{0.0, 0.0, 0.0, 0.0};
  const PlanarState out = rk4_step(k, FrictionModel::frictionless, 0.0, s, 0.0, 1e-3,
                                   TorqueProfile::constant(0.0));
  CHECK(out.theta == 0.0);
  CHECK(out.theta_dot == 0.0);
  CHECK(out.gamma == 0.0);
  CHECK(out.gamma_dot == 0.0);
}

TEST_CASE("rk4 step matches two half steps at tight tolerance") {
  const DerivedConstants k = validate_and_derive(RobotParams{});
  const TorqueProfile tau = TorqueProfile::constant(1.0);
  const PlanarState s{0.0, 0.0, 0.0, 0.0};
  const double dt = 1e-4;
  const PlanarState full = rk4_step(k, FrictionModel::frictionless, 0.0, s, 0.0, dt, tau);
  PlanarState halves = rk4_step(k, FrictionModel::frictionless, 0.0, s, 0.0, dt / 2, tau);
  halves = rk4_step(k, FrictionModel::frictionless, 0.0, halves, dt / 2, dt / 2, tau);
  CHECK(max_abs_state_diff(full, halves) < 1e-12);
}

TEST_CASE("rk4 order of convergence on the pulse scenario") {
  RobotParams params;
  const TorqueProfile tau = TorqueProfile::pulse(-1.0, 0.0, 1.0);
  const double t_end = 3.0;
  auto final_state = [&](double dt) {
    SimConfig cfg = pulse_config(dt, t_end, FrictionModel::frictionless);
    cfg.record_every = static_cast<int>(std::lround(t_end / dt));  // record endpoint only
    const Trajectory t = simulate(params, cfg, tau);
    return t.state_at(t.size() - 1);
  };
  double errs[3];
  const double dts[3] = {1e-2, 5e-3, 2.5e-3};
  for (int i = 0; i < 3; ++i) {
    errs[i] = max_abs_state_diff(final_state(dts[i]), final_state(dts[i] / 100.0));
  }
  // fourth order: halving dt cuts the error ~16x (allow a factor of 4 band)
  CHECK(errs[0] / errs[1] > 4.0);
  CHECK(errs[0] / errs[1] < 64.0);
  CHECK(errs[1] / errs[2] > 4.0);
  CHECK(errs[1] / errs[2] < 64.0);
}

TEST_CASE("energy conservation on the free swing") {
  RobotParams params;
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 10.0;
  cfg.record_every = 1;
  cfg.model = FrictionModel::frictionless;
  cfg.initial_state = {0.0, 0.0, 2.0, 0.0};
  const Trajectory traj = simulate(params, cfg, TorqueProfile::constant(0.0));
  const double e0 = traj.energy.front();
  for (const double e : traj.energy) {
    CHECK(std::abs(e - e0) <= 1e-6 * std::abs(e0) + 1e-9);
  }
}

TEST_CASE("frictional free trajectories dissipate monotonically") {
  RobotParams params;  // zeta = 0.8
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 8.0;
  cfg.record_every = 1;
  cfg.model = FrictionModel::frictional;
  cfg.initial_state = {0.0, 0.0, 2.0, 0.0};
  const Trajectory traj = simulate(params, cfg, TorqueProfile::constant(0.0));
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK(traj.energy[i] <= traj.energy[i - 1] + 1e-8);
  }
}

TEST_CASE("simulate is deterministic") {
  RobotParams params;
  SimConfig cfg = pulse_config(1e-3, 2.0, FrictionModel::frictional);
  const TorqueProfile tau = TorqueProfile::pulse(-1.0, 0.0, 1.0);
  const Trajectory a = simulate(params, cfg, tau);
  const Trajectory b = simulate(params, cfg, tau);
  REQUIRE(a.size() == b.size());
  CHECK(a.theta == b.theta);
  CHECK(a.theta_dot == b.theta_dot);
  CHECK(a.gamma == b.gamma);
  CHECK(a.gamma_dot == b.gamma_dot);
  CHECK(a.energy == b.energy);
}

TEST_CASE("trajectory channels are uniform and consistent") {
  RobotParams params;
  SimConfig cfg = pulse_config(1e-3, 1.5, FrictionModel::frictionless);
  cfg.record_every = 5;
  const Trajectory t = simulate(params, cfg, TorqueProfile::pulse(-1.0, 0.0, 1.0));
  REQUIRE(t.size() == 301);
  for (std::size_t i = 1; i < t.size(); ++i) {
    CHECK(t.times[i] - t.times[i - 1] == doctest::Approx(5e-3).epsilon(1e-9));
  }
  CHECK(t.theta.size() == t.size());
  CHECK(t.momentum_z.size() == t.size());
  CHECK(t.torque.front() == -1.0);
  CHECK(t.torque.back() == 0.0);
}

TEST_CASE("post-pulse mean sphere velocity obeys the momentum bound") {
  // After a pulse of integral J, (a-D) theta_dot + b (theta_dot+gamma_dot) cos(phase)
  // stays at -J, and the coupling term time-averages to b*Delta(sin)/T. The
  // window mean of theta_dot is therefore pinned to [-J - 2b/T, -J + 2b/T]/(a-D)
  // regardless of the motion regime. Independent analytic oracle for the drift.
  RobotParams params;
  const DerivedConstants k = validate_and_derive(params);
  for (const double amp : {1.0, -1.0}) {
    SimConfig cfg = pulse_config(1e-3, 10.0, FrictionModel::frictionless);
    const Trajectory t = simulate(params, cfg, TorqueProfile::pulse(amp, 0.0, 1.0));
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.times[i] >= 2.0) {
        sum += t.theta_dot[i];
        ++n;
      }
    }
    const double mean = sum / static_cast<double>(n);
    const double window = 8.0;
    const double slack = 2.0 * k.coupling / window / (k.inertia_sum - k.core_moment);
    const double center = -amp / (k.inertia_sum - k.core_moment);
    CHECK(mean > center - slack - 1e-6);
    CHECK(mean < center + slack + 1e-6);
  }
}

TEST_CASE("pulse onset responds linearly in the torque") {
  RobotParams params;
  double ratios[3];
  const double amps[3] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 3; ++i) {
    SimConfig cfg = pulse_config(1e-4, 0.05, FrictionModel::frictionless);
    const Trajectory t = simulate(params, cfg, TorqueProfile::pulse(amps[i], 0.0, 1.0));
    ratios[i] = t.gamma_dot.back() / amps[i];
  }
  CHECK(std::abs(ratios[0] - ratios[1]) / std::abs(ratios[1]) < 0.05);
  CHECK(std::abs(ratios[2] - ratios[1]) / std::abs(ratios[1]) < 0.05);
}

TEST_CASE("frictional pulse settles the core") {
  RobotParams params;  // zeta 0.8
  SimConfig cfg = pulse_config(1e-3, 10.0, FrictionModel::frictional);
  const Trajectory t = simulate(params, cfg, TorqueProfile::pulse(-1.0, 0.0, 1.0));
  const auto settle = settle_time(t, Channel::gamma_dot, 0.01);
  REQUIRE(settle.has_value());
  CHECK(*settle <= 5.0);
}

TEST_CASE("non-finite states abort with a partial trajectory") {
  RobotParams params;
  SimConfig cfg = pulse_config(1e-3, 1.0, FrictionModel::frictionless);
  cfg.initial_state = {0.0, 1e200, 0.0, 0.0};
  const Trajectory t = simulate(params, cfg, TorqueProfile::constant(0.0));
  CHECK(t.aborted);
  CHECK(!t.abort_reason.empty());
  CHECK(t.size() >= 1);
}

TEST_CASE("sim config validation") {
  SimConfig cfg;
  cfg.dt = 0.02;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = SimConfig{};
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = SimConfig{};
  cfg.record_every = 200000;  // dt * record_every > t_end
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = SimConfig{};
  cfg.initial_state.theta = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

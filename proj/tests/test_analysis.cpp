#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rollsim/analysis.hpp"
#include "rollsim/torque.hpp"

using namespace rollsim;

namespace {

// Minimal synthetic trajectory with a chosen theta_dot channel.
Trajectory synthetic(const std::vector<double>& values, double dt = 0.01) {
  Trajectory t;
  for (std::size_t i = 0; i < values.size(); ++i) {
    t.times.push_back(static_cast<double>(i) * dt);
    t.theta.push_back(0.0);
    t.theta_dot.push_back(values[i]);
    t.gamma.push_back(0.0);
    t.gamma_dot.push_back(values[i]);
    t.torque.push_back(0.0);
    t.energy.push_back(0.0);
    t.sphere_y.push_back(0.0);
    t.core_y.push_back(0.0);
    t.core_z.push_back(0.0);
    t.momentum_y.push_back(0.0);
    t.momentum_z.push_back(0.0);
  }
  return t;
}

}  // namespace

TEST_CASE("ripple stats on reference signals") {
  SUBCASE("constant channel has zero amplitudes and no ratio") {
    const Trajectory t = synthetic(std::vector<double>(100, 3.5));
    const RippleStats s = ripple_stats(t, Channel::theta_dot, 0.0, 1.0);
    CHECK(s.mean == doctest::Approx(3.5));
    CHECK(s.uphill == 0.0);
    CHECK(s.downhill == 0.0);
    CHECK(!s.ratio.has_value());
    CHECK(s.diagnostic.has_value());  // no crossings at all
  }
  SUBCASE("pure sinusoid is symmetric within 1% over three periods") {
    const double amp = 0.7, offset = 2.0, omega = 2.0 * std::numbers::pi;  // 1 Hz
    std::vector<double> v;
    for (int i = 0; i < 300; ++i) v.push_back(offset + amp * std::sin(omega * i * 0.01));
    const Trajectory t = synthetic(v);
    const RippleStats s = ripple_stats(t, Channel::theta_dot, 0.0, 3.0);
    CHECK(s.mean == doctest::Approx(offset).epsilon(1e-3));
    CHECK(s.uphill == doctest::Approx(amp).epsilon(0.01));
    CHECK(s.downhill == doctest::Approx(amp).epsilon(0.01));
    REQUIRE(s.ratio.has_value());
    CHECK(*s.ratio == doctest::Approx(1.0).epsilon(0.01));
    CHECK(!s.diagnostic.has_value());  // three full periods
  }
  SUBCASE("mean removal makes the stats offset-invariant") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v;
    for (int i = 0; i < 200; ++i) v.push_back(u(rng));
    const Trajectory base = synthetic(v);
    for (auto& x : v) x += 5.0;
    const Trajectory shifted = synthetic(v);
    const RippleStats a = ripple_stats(base, Channel::theta_dot, 0.0, 2.0);
    const RippleStats b = ripple_stats(shifted, Channel::theta_dot, 0.0, 2.0);
    CHECK(std::abs(a.uphill - b.uphill) < 1e-12);
    CHECK(std::abs(a.downhill - b.downhill) < 1e-12);
  }
  SUBCASE("empty window throws") {
    const Trajectory t = synthetic(std::vector<double>(10, 1.0));
    CHECK_THROWS_AS(ripple_stats(t, Channel::theta_dot, 5.0, 6.0), EmptyWindow);
  }
}

TEST_CASE("settle time") {
  SUBCASE("identically zero settles at zero") {
    const Trajectory t = synthetic(std::vector<double>(50, 0.0));
    const auto s = settle_time(t, Channel::theta_dot, 0.01);
    REQUIRE(s.has_value());
    CHECK(*s == 0.0);
  }
  SUBCASE("stays above threshold: never settles") {
    const Trajectory t = synthetic(std::vector<double>(50, 1.0));
    CHECK(!settle_time(t, Channel::theta_dot, 0.01).has_value());
  }
  SUBCASE("settles after the last excursion") {
    const Trajectory t = synthetic({1.0, 0.5, 0.005, 0.02, 0.004, 0.003});
    const auto s = settle_time(t, Channel::theta_dot, 0.01);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(0.04));  // sample after the 0.02 excursion
  }
  SUBCASE("monotone in the threshold") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v;
    double amp = 1.0;
    for (int i = 0; i < 300; ++i) {
      v.push_back(amp * (2.0 * u(rng) - 1.0));
      amp *= 0.98;
    }
    const Trajectory t = synthetic(v);
    double prev = 1e300;
    for (const double threshold : {0.01, 0.05, 0.1, 0.5}) {
      const auto s = settle_time(t, Channel::theta_dot, threshold);
      const double val = s ? *s : 1e301;
      CHECK(val <= prev + 1e-12);
      prev = val;
    }
    CHECK_THROWS_AS(settle_time(t, Channel::theta_dot, 0.0), ValidationError);
  }
}

TEST_CASE("waving flag separates band-dominated from drift-dominated signals") {
  std::vector<double> calm, wavy;
  for (int i = 0; i < 400; ++i) {
    const double osc = std::sin(0.5 * i);
    calm.push_back(5.0 + 0.3 * osc);   // band 0.6 << mean 5
    wavy.push_back(1.0 + 1.5 * osc);   // band 3.0 >= mean 1
  }
  CHECK(!waving_flag(synthetic(calm), Channel::theta_dot, 0.0));
  CHECK(waving_flag(synthetic(wavy), Channel::theta_dot, 0.0));
}

TEST_CASE("trajectory comparison") {
  RobotParams params;
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 3.0;
  cfg.record_every = 1;
  cfg.model = FrictionModel::frictionless;
  const TorqueProfile tau = TorqueProfile::pulse(-1.0, 0.0, 1.0);
  const Trajectory nf = simulate(params, cfg, tau);
  cfg.model = FrictionModel::frictional;
  const Trajectory fr = simulate(params, cfg, tau);

  SUBCASE("self comparison is all zero") {
    const ComparisonReport rep = compare(nf, nf);
    for (const auto& c : rep.channels) {
      CHECK(c.rms == 0.0);
      CHECK(c.final_delta == 0.0);
    }
  }
  SUBCASE("rms magnitudes are symmetric") {
    const ComparisonReport ab = compare(nf, fr);
    const ComparisonReport ba = compare(fr, nf);
    for (std::size_t i = 0; i < ab.channels.size(); ++i) {
      CHECK(ab.channels[i].rms == doctest::Approx(ba.channels[i].rms).epsilon(1e-12));
      CHECK(ab.channels[i].final_delta == doctest::Approx(-ba.channels[i].final_delta));
    }
  }
  SUBCASE("dissipation shortens the travel") {
    CHECK(fr.theta.back() < nf.theta.back());
  }
  SUBCASE("undamped sphere velocity never settles") {
    CHECK(!settle_time(nf, Channel::theta_dot, 0.01).has_value());
  }
  SUBCASE("different sampling grids still align on common times") {
    SimConfig coarse = cfg;
    coarse.model = FrictionModel::frictionless;
    coarse.dt = 1e-3;
    coarse.record_every = 10;
    const Trajectory c = simulate(params, coarse, tau);
    const ComparisonReport rep = compare(nf, c);
    CHECK(rep.common_samples == c.size());
    CHECK(rep.max_state_rms() < 1e-12);
  }
  SUBCASE("disjoint ranges throw") {
    Trajectory shifted = nf;
    for (auto& t : shifted.times) t += 100.0;
    CHECK_THROWS_AS(compare(nf, shifted), NoOverlap);
  }
  SUBCASE("rendering carries the channels") {
    const ComparisonReport rep = compare(nf, fr);
    const std::string text = render_comparison_text(rep);
    CHECK(text.find("theta_dot") != std::string::npos);
    const std::string kv = render_comparison_kv(rep);
    CHECK(kv.find("compare.rms.theta") != std::string::npos);
  }
}

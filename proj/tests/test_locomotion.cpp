#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rollsim/locomotion.hpp"

using namespace rollsim;

namespace {
constexpr double kPi = std::numbers::pi;
const std::string kDataFile = std::string(ROLLSIM_DATA_DIR) + "/locomotion.dat";
}  // namespace

TEST_CASE("default tube geometry partitions the circle") {
  const TubeGeometry g = TubeGeometry::default_geometry();
  CHECK_NOTHROW(g.validate());

  CHECK(g.classify(0.0).id == SegmentId::ep);
  CHECK(g.classify(kPi / 2.0).id == SegmentId::mm_alpha);
  CHECK(g.classify(kPi).id == SegmentId::ep);
  CHECK(g.classify(3.0 * kPi / 2.0).id == SegmentId::mm_beta);
  CHECK(g.classify(0.1).id == SegmentId::gb_alpha);
  CHECK(g.classify(kPi - 0.1).id == SegmentId::gb_beta);

  // modular reduction
  CHECK(g.classify(2.0 * kPi + 0.01).id == g.classify(0.01).id);
  CHECK(g.classify(-0.01).id == SegmentId::ep);

  // total function over random angles; the winning span contains the angle
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const double phi = u(rng);
    const TubeSegment& s = g.classify(phi);
    double w = std::fmod(phi, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    CHECK(w >= s.span_start - 1e-9);
    CHECK(w < s.span_end + 1e-9);
  }
}

TEST_CASE("geometry validation rejects gaps and overlaps") {
  TubeGeometry g = TubeGeometry::default_geometry();
  g.segments[2].span_end -= 0.05;  // leave a gap
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = TubeGeometry::default_geometry();
  g.segments.pop_back();
  CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("forward cycle table matches the reference rows") {
  static const char* const kGolden[5] = {
      "a | I II II I | I S O O | MM",
      "b | I I II II | O I S O | MM",
      "c | II I I II | S O I O | MM",
      "d | II II I I | S O I O | GB",
      "e | II I I II | I T S T | EP",
  };
  const auto& table = forward_cycle_table();
  for (int i = 0; i < 5; ++i) {
    CHECK(serialize_mode(table[i]) == kGolden[i]);
    CHECK(parse_mode(kGolden[i]) == table[i]);  // round-trip
  }
  CHECK(table[0].core_location == SegmentClass::momentum_maker);
  CHECK(table[3].core_location == SegmentClass::gravity_breaker);
  CHECK(table[4].core_location == SegmentClass::equilibrium_point);
  CHECK_THROWS_AS(parse_mode("z | I I I I | O O O O | MM"), ValidationError);
}

TEST_CASE("mode advance is position-gated") {
  const auto& table = forward_cycle_table();
  const CycleMode a = table[0];

  // holds while the core is not in the next row's segment class
  CHECK(next_mode(a, SegmentClass::gravity_breaker, 0.0).mode.mode == 'a');
  CHECK(next_mode(a, SegmentClass::equilibrium_point, 0.0).mode.mode == 'a');
  // advances when it is
  CHECK(next_mode(a, SegmentClass::momentum_maker, 0.0).mode.mode == 'b');
  CHECK(next_mode(table[2], SegmentClass::gravity_breaker, 0.0).mode.mode == 'd');
  CHECK(next_mode(table[3], SegmentClass::gravity_breaker, 0.0).mode.mode == 'd');  // holds in GB
  CHECK(next_mode(table[3], SegmentClass::equilibrium_point, 0.0).mode.mode == 'e');
  CHECK(next_mode(table[4], SegmentClass::momentum_maker, 0.0).mode.mode == 'a');

  // stall diagnostic only after a long hold, never a forced transition
  CHECK(!next_mode(a, SegmentClass::gravity_breaker, 9.0).stalled);
  const ModeAdvance stalled = next_mode(a, SegmentClass::gravity_breaker, 11.0);
  CHECK(stalled.stalled);
  CHECK(stalled.mode.mode == 'a');
}

TEST_CASE("cycle closes in exactly five transitions from any row") {
  const auto& table = forward_cycle_table();
  for (const auto& start : table) {
    CycleMode m = start;
    int transitions = 0;
    for (int step = 0; step < 5; ++step) {
      std::size_t idx = 0;
      while (table[idx].mode != m.mode) ++idx;
      const ModeAdvance adv = next_mode(m, table[(idx + 1) % 5].core_location, 0.0);
      if (adv.mode.mode != m.mode) ++transitions;
      m = adv.mode;
    }
    CHECK(transitions == 5);
    CHECK(m == start);
  }
}

TEST_CASE("gate timing boundary values") {
  const auto [g1_0, g2_0] = gate_timing(0.0);
  CHECK(g1_0 == doctest::Approx(-1.9).epsilon(1e-12));
  CHECK(g2_0 == doctest::Approx(1.9).epsilon(1e-12));

  const auto [g1_1, g2_1] = gate_timing(1.0);
  CHECK(g1_1 == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(g2_1 == doctest::Approx(2.0).epsilon(1e-12));

  const auto [g1_3, g2_3] = gate_timing(3.0);
  CHECK(g1_3 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g2_3 == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("gate timing is continuous near its breakpoints") {
  const double breakpoints[] = {0.001, 0.002, 1.3, 1.3001, 1.55, 1.55001};
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
    CHECK(max_diff <= 2e6 * eps);  // bounded slope, no jumps
  }
}

TEST_CASE("shipped locomotion data validates cleanly") {
  const LocomotionData data = load_locomotion_data(kDataFile);
  CHECK_NOTHROW(data.geometry.validate());
  CHECK(data.sequences.size() == 5);
  for (const Motion m : {Motion::forward, Motion::circular, Motion::angular, Motion::slide,
                         Motion::jump}) {
    const GestureSequence* seq = data.find(m);
    REQUIRE(seq != nullptr);
    const auto violations = validate_sequence(*seq);
    CAPTURE(motion_name(m));
    CHECK(violations.empty());
  }
}

TEST_CASE("sequence validation catches the named defects") {
  const LocomotionData data = load_locomotion_data(kDataFile);
  const GestureSequence forward = *data.find(Motion::forward);

  SUBCASE("duplicate consecutive steps") {
    GestureSequence bad = forward;
    bad.steps.insert(bad.steps.begin() + 1, bad.steps[1]);
    const auto v = validate_sequence(bad);
    REQUIRE(v.size() == 1);
    CHECK(v.front().find("identical") != std::string::npos);
  }
  SUBCASE("cycle order break") {
    GestureSequence bad = forward;
    bad.steps[1].ft = SegmentId::gb_beta;  // EP -> GB skips the momentum maker
    CHECK(!validate_sequence(bad).empty());
  }
  SUBCASE("alpha/beta alternation break") {
    GestureSequence bad = forward;
    bad.steps[4].ft = SegmentId::mm_alpha;  // repeats alpha
    CHECK(!validate_sequence(bad).empty());
  }
  SUBCASE("jump must start with the turner core at a junction") {
    GestureSequence bad = *data.find(Motion::jump);
    bad.steps[0].tt = SegmentId::mm_alpha;
    const auto v = validate_sequence(bad);
    REQUIRE(!v.empty());
    CHECK(v.front().find("equilibrium point") != std::string::npos);
  }
  SUBCASE("slide must hold the forwarder core at steps 1-3") {
    GestureSequence bad = *data.find(Motion::slide);
    bad.steps[1].ft = SegmentId::mm_alpha;
    CHECK(!validate_sequence(bad).empty());
  }
  SUBCASE("empty sequence") {
    GestureSequence bad;
    bad.motion = Motion::angular;
    const auto v = validate_sequence(bad);
    REQUIRE(v.size() == 1);
    CHECK(v.front().find("empty") != std::string::npos);
  }
}

TEST_CASE("data file diagnostics") {
  CHECK_THROWS_AS(load_locomotion_data("/nonexistent/file.dat"), ParseError);
  CHECK_THROWS_AS(parse_locomotion_data("geometry.segment.0 = ep zero 0.02\n", "bad"),
                  ParseError);
  CHECK_THROWS_AS(parse_locomotion_data("sequence.0.motion = forward\n", "bad"), ParseError);
}

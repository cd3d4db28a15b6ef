#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "rollsim/errors.hpp"

namespace rollsim {

// Tube regions. Momentum makers are the two half-circle arcs, gravity breakers
// the chord paths (mapped to arcs around the junctions), equilibrium points
// the junction bands where the core can rest.
enum class SegmentId { mm_alpha, mm_beta, gb_alpha, gb_beta, ep };
enum class SegmentClass { momentum_maker, gravity_breaker, equilibrium_point };

SegmentClass segment_class(SegmentId id);
std::string segment_id_name(SegmentId id);
SegmentId segment_id_from_name(const std::string& name);  // throws ValidationError
std::string segment_class_name(SegmentClass c);
SegmentClass segment_class_from_name(const std::string& name);

// Half-open angular span [start, end) on the tube circle; spans of one id may
// appear multiple times (both junction bands map to `ep`).
struct TubeSegment {
  SegmentId id = SegmentId::ep;
  double span_start = 0.0;
  double span_end = 0.0;
};

// A set of segments partitioning [0, 2pi).
struct TubeGeometry {
  std::vector<TubeSegment> segments;

  // Junction bands +-0.02 rad around 0 and pi, gravity breakers out to +-0.35,
  // momentum makers covering the remaining half-arcs.
  static TubeGeometry default_geometry();

  // Throws ValidationError unless the spans exactly partition [0, 2pi).
  void validate() const;

  // Total over all angles: classifies phi mod 2pi.
  const TubeSegment& classify(double phi) const;
};

// Gate/port function labels of the forward-motion cycle table.
enum class GateFunction { closed_both, route_a, route_b };        // I, II, III
enum class PortFunction { off, suction, injection, tank };       // O, S, I, T

std::string gate_label(GateFunction g);   // "I" / "II" / "III"
std::string port_label(PortFunction p);   // "O" / "S" / "I" / "T"
GateFunction gate_from_label(const std::string& s);
PortFunction port_from_label(const std::string& s);

// One row of the forward-motion cycle: gate functions G1..G4, port functions
// P1..P4 and the core location class required while the row is active.
struct CycleMode {
  char mode = 'a';  // 'a'..'e'
  std::array<GateFunction, 4> gates{};
  std::array<PortFunction, 4> ports{};
  SegmentClass core_location = SegmentClass::momentum_maker;

  bool operator==(const CycleMode&) const = default;
};

// The five rows a..e of the forward-motion cycle.
const std::array<CycleMode, 5>& forward_cycle_table();

// Single-line serialization "a | I II II I | I S O O | MM" used by the data
// checker and goldens.
std::string serialize_mode(const CycleMode& m);
CycleMode parse_mode(const std::string& line);

struct ModeAdvance {
  CycleMode mode;
  bool stalled = false;  // diagnostic only; no timeout transition
};

// Advances a->b->c->d->e->a when the core sits in the segment class required
// by the next row; holds otherwise. elapsed_in_mode feeds only the stall
// diagnostic (raised after 10 s without the next row's condition).
ModeAdvance next_mode(const CycleMode& current, SegmentClass core_segment,
                      double elapsed_in_mode);

// Commanded values of the two control gates as functions of time (composite
// cubic-step expressions); continuous in t.
std::pair<double, double> gate_timing(double t);

enum class Motion { forward, circular, angular, slide, jump };
std::string motion_name(Motion m);
Motion motion_from_name(const std::string& name);

// One gesture: where the forwarder-tube and turner-tube cores sit.
struct GestureStep {
  SegmentId ft = SegmentId::ep;
  SegmentId tt = SegmentId::ep;
  std::string note;
};

struct GestureSequence {
  Motion motion = Motion::forward;
  std::vector<GestureStep> steps;
};

// Returns human-readable violations; empty means the sequence is valid.
// Checks: non-empty; consecutive steps differ; forward follows the
// EP->MM->GB cycle with alpha/beta alternation; jump starts with the
// turner-tube core at an equilibrium point; slide holds the forwarder tube
// still while the turner-tube core moves (steps 2-3).
std::vector<std::string> validate_sequence(const GestureSequence& seq);

// Bundled tube geometry and gesture sequences, loadable from a data file.
struct LocomotionData {
  TubeGeometry geometry;
  std::vector<GestureSequence> sequences;

  const GestureSequence* find(Motion m) const;
};

LocomotionData load_locomotion_data(const std::string& path);
LocomotionData parse_locomotion_data(const std::string& text, const std::string& source_name);

}  // namespace rollsim

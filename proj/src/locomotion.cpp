#include "rollsim/locomotion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "rollsim/flatcfg.hpp"
#include "rollsim/torque.hpp"

namespace rollsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpanTol = 1e-9;
constexpr double kStallSeconds = 10.0;
}  // namespace

SegmentClass segment_class(SegmentId id) {
  switch (id) {
    case SegmentId::mm_alpha:
    case SegmentId::mm_beta: return SegmentClass::momentum_maker;
    case SegmentId::gb_alpha:
    case SegmentId::gb_beta: return SegmentClass::gravity_breaker;
    case SegmentId::ep: return SegmentClass::equilibrium_point;
  }
  throw ValidationError("bad segment id");
}

std::string segment_id_name(SegmentId id) {
  switch (id) {
    case SegmentId::mm_alpha: return "mm_alpha";
    case SegmentId::mm_beta: return "mm_beta";
    case SegmentId::gb_alpha: return "gb_alpha";
    case SegmentId::gb_beta: return "gb_beta";
    case SegmentId::ep: return "ep";
  }
  throw ValidationError("bad segment id");
}

SegmentId segment_id_from_name(const std::string& name) {
  if (name == "mm_alpha") return SegmentId::mm_alpha;
  if (name == "mm_beta") return SegmentId::mm_beta;
  if (name == "gb_alpha") return SegmentId::gb_alpha;
  if (name == "gb_beta") return SegmentId::gb_beta;
  if (name == "ep") return SegmentId::ep;
  throw ValidationError("unknown tube segment: " + name);
}

std::string segment_class_name(SegmentClass c) {
  switch (c) {
    case SegmentClass::momentum_maker: return "MM";
    case SegmentClass::gravity_breaker: return "GB";
    case SegmentClass::equilibrium_point: return "EP";
  }
  throw ValidationError("bad segment class");
}

SegmentClass segment_class_from_name(const std::string& name) {
  if (name == "MM") return SegmentClass::momentum_maker;
  if (name == "GB") return SegmentClass::gravity_breaker;
  if (name == "EP") return SegmentClass::equilibrium_point;
  throw ValidationError("unknown segment class: " + name);
}

TubeGeometry TubeGeometry::default_geometry() {
  constexpr double pi = std::numbers::pi;
  constexpr double tol = 0.02;   // junction band half-width
  constexpr double gb = 0.35;    // gravity-breaker arc reach from each junction
  TubeGeometry g;
  g.segments = {
      {SegmentId::ep, 0.0, tol},
      {SegmentId::gb_alpha, tol, gb},
      {SegmentId::mm_alpha, gb, pi - gb},
      {SegmentId::gb_beta, pi - gb, pi - tol},
      {SegmentId::ep, pi - tol, pi + tol},
      {SegmentId::gb_beta, pi + tol, pi + gb},
      {SegmentId::mm_beta, pi + gb, kTwoPi - gb},
      {SegmentId::gb_alpha, kTwoPi - gb, kTwoPi - tol},
      {SegmentId::ep, kTwoPi - tol, kTwoPi},
  };
  return g;
}

void TubeGeometry::validate() const {
  if (segments.empty()) throw ValidationError("tube geometry has no segments");
  std::vector<TubeSegment> sorted = segments;
  std::sort(sorted.begin(), sorted.end(),
            [](const TubeSegment& a, const TubeSegment& b) { return a.span_start < b.span_start; });
  double cursor = 0.0;
  for (const auto& s : sorted) {
    if (!(s.span_end > s.span_start))
      throw ValidationError("tube segment with empty span: " + segment_id_name(s.id));
    if (std::abs(s.span_start - cursor) > kSpanTol)
      throw ValidationError("tube segments leave a gap or overlap near angle " +
                            std::to_string(cursor));
    cursor = s.span_end;
  }
  if (std::abs(cursor - kTwoPi) > kSpanTol)
    throw ValidationError("tube segments do not cover the full circle");
}

const TubeSegment& TubeGeometry::classify(double phi) const {
  double wrapped = std::fmod(phi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  for (const auto& s : segments) {
    if (wrapped >= s.span_start && wrapped < s.span_end) return s;
  }
  // wrapped can only land here through rounding at the 2pi seam
  return segments.back();
}

std::string gate_label(GateFunction g) {
  switch (g) {
    case GateFunction::closed_both: return "I";
    case GateFunction::route_a: return "II";
    case GateFunction::route_b: return "III";
  }
  throw ValidationError("bad gate function");
}

std::string port_label(PortFunction p) {
  switch (p) {
    case PortFunction::off: return "O";
    case PortFunction::suction: return "S";
    case PortFunction::injection: return "I";
    case PortFunction::tank: return "T";
  }
  throw ValidationError("bad port function");
}

GateFunction gate_from_label(const std::string& s) {
  if (s == "I") return GateFunction::closed_both;
  if (s == "II") return GateFunction::route_a;
  if (s == "III") return GateFunction::route_b;
  throw ValidationError("unknown gate function label: " + s);
}

PortFunction port_from_label(const std::string& s) {
  if (s == "O") return PortFunction::off;
  if (s == "S") return PortFunction::suction;
  if (s == "I") return PortFunction::injection;
  if (s == "T") return PortFunction::tank;
  throw ValidationError("unknown port function label: " + s);
}

const std::array<CycleMode, 5>& forward_cycle_table() {
  using G = GateFunction;
  using P = PortFunction;
  static const std::array<CycleMode, 5> table = {{
      {'a', {G::closed_both, G::route_a, G::route_a, G::closed_both},
       {P::injection, P::suction, P::off, P::off}, SegmentClass::momentum_maker},
      {'b', {G::closed_both, G::closed_both, G::route_a, G::route_a},
       {P::off, P::injection, P::suction, P::off}, SegmentClass::momentum_maker},
      {'c', {G::route_a, G::closed_both, G::closed_both, G::route_a},
       {P::suction, P::off, P::injection, P::off}, SegmentClass::momentum_maker},
      {'d', {G::route_a, G::route_a, G::closed_both, G::closed_both},
       {P::suction, P::off, P::injection, P::off}, SegmentClass::gravity_breaker},
      {'e', {G::route_a, G::closed_both, G::closed_both, G::route_a},
       {P::injection, P::tank, P::suction, P::tank}, SegmentClass::equilibrium_point},
  }};
  return table;
}

std::string serialize_mode(const CycleMode& m) {
  std::ostringstream out;
  out << m.mode << " |";
  for (const auto& g : m.gates) out << ' ' << gate_label(g);
  out << " |";
  for (const auto& p : m.ports) out << ' ' << port_label(p);
  out << " | " << segment_class_name(m.core_location);
  return out.str();
}

CycleMode parse_mode(const std::string& line) {
  std::istringstream in(line);
  std::string tok;
  CycleMode m;
  auto next = [&](const char* what) {
    if (!(in >> tok)) throw ValidationError(std::string("cycle mode line truncated at ") + what);
    return tok;
  };
  const std::string mode = next("mode");
  if (mode.size() != 1 || mode[0] < 'a' || mode[0] > 'e')
    throw ValidationError("bad cycle mode letter: " + mode);
  m.mode = mode[0];
  if (next("separator") != "|") throw ValidationError("expected '|' after mode");
  for (auto& g : m.gates) g = gate_from_label(next("gate"));
  if (next("separator") != "|") throw ValidationError("expected '|' after gates");
  for (auto& p : m.ports) p = port_from_label(next("port"));
  if (next("separator") != "|") throw ValidationError("expected '|' after ports");
  m.core_location = segment_class_from_name(next("core location"));
  return m;
}

ModeAdvance next_mode(const CycleMode& current, SegmentClass core_segment,
                      double elapsed_in_mode) {
  const auto& table = forward_cycle_table();
  std::size_t idx = 0;
  for (; idx < table.size(); ++idx) {
    if (table[idx].mode == current.mode) break;
  }
  if (idx == table.size()) throw ValidationError("current mode is not a cycle row");
  const CycleMode& next = table[(idx + 1) % table.size()];
  if (core_segment == next.core_location) return {next, false};
  return {current, elapsed_in_mode > kStallSeconds};
}

std::pair<double, double> gate_timing(double t) {
  static const SmoothStepExpr first{0.0,
                                    {{-2.0, SmoothStep{0.001, 0.95, 0.002, 1.0}},
                                     {4.0, SmoothStep{1.55, 0.0, 1.55001, 1.0}}}};
  static const SmoothStepExpr second{0.0,
                                     {{2.0, SmoothStep{0.001, 0.95, 0.002, 1.0}},
                                      {-4.0, SmoothStep{1.3, 0.0, 1.3001, 1.0}}}};
  return {first.value(t), second.value(t)};
}

std::string motion_name(Motion m) {
  switch (m) {
    case Motion::forward: return "forward";
    case Motion::circular: return "circular";
    case Motion::angular: return "angular";
    case Motion::slide: return "slide";
    case Motion::jump: return "jump";
  }
  throw ValidationError("bad motion");
}

Motion motion_from_name(const std::string& name) {
  if (name == "forward") return Motion::forward;
  if (name == "circular") return Motion::circular;
  if (name == "angular") return Motion::angular;
  if (name == "slide") return Motion::slide;
  if (name == "jump") return Motion::jump;
  throw ValidationError("unknown motion: " + name);
}

std::vector<std::string> validate_sequence(const GestureSequence& seq) {
  std::vector<std::string> violations;
  const std::string name = motion_name(seq.motion);
  if (seq.steps.empty()) {
    violations.push_back(name + ": sequence is empty");
    return violations;
  }
  for (std::size_t i = 0; i + 1 < seq.steps.size(); ++i) {
    if (seq.steps[i].ft == seq.steps[i + 1].ft && seq.steps[i].tt == seq.steps[i + 1].tt)
      violations.push_back(name + ": steps " + std::to_string(i) + " and " +
                           std::to_string(i + 1) + " are identical");
  }

  if (seq.motion == Motion::forward || seq.motion == Motion::circular) {
    // The forwarder-tube core must walk the cycle EP -> MM -> GB -> EP ...
    SegmentClass prev = segment_class(seq.steps.front().ft);
    std::vector<SegmentId> mm_ids, gb_ids;
    auto collect = [&](SegmentId id) {
      const SegmentClass c = segment_class(id);
      if (c == SegmentClass::momentum_maker) mm_ids.push_back(id);
      if (c == SegmentClass::gravity_breaker) gb_ids.push_back(id);
    };
    collect(seq.steps.front().ft);
    for (std::size_t i = 1; i < seq.steps.size(); ++i) {
      const SegmentClass cur = segment_class(seq.steps[i].ft);
      if (cur == prev) continue;
      const bool ok =
          (prev == SegmentClass::equilibrium_point && cur == SegmentClass::momentum_maker) ||
          (prev == SegmentClass::momentum_maker && cur == SegmentClass::gravity_breaker) ||
          (prev == SegmentClass::gravity_breaker && cur == SegmentClass::equilibrium_point);
      if (!ok)
        violations.push_back(name + ": step " + std::to_string(i) +
                             " breaks the EP->MM->GB cycle order (" + segment_class_name(prev) +
                             " -> " + segment_class_name(cur) + ")");
      collect(seq.steps[i].ft);
      prev = cur;
    }
    for (std::size_t i = 1; i < mm_ids.size(); ++i) {
      if (mm_ids[i] == mm_ids[i - 1])
        violations.push_back(name + ": momentum-maker passes must alternate alpha/beta");
    }
    for (std::size_t i = 1; i < gb_ids.size(); ++i) {
      if (gb_ids[i] == gb_ids[i - 1])
        violations.push_back(name + ": gravity-breaker passes must alternate alpha/beta");
    }
  }

  if (seq.motion == Motion::jump) {
    if (segment_class(seq.steps.front().tt) != SegmentClass::equilibrium_point)
      violations.push_back(
          name + ": jump must begin with the turner-tube core at an equilibrium point");
  }

  if (seq.motion == Motion::slide) {
    if (seq.steps.size() < 3) {
      violations.push_back(name + ": slide needs at least 3 steps");
    } else if (seq.steps[0].ft != seq.steps[1].ft || seq.steps[1].ft != seq.steps[2].ft) {
      violations.push_back(
          name + ": forwarder-tube core must hold still while the turner-tube core moves "
                 "(steps 1-3)");
    }
  }
  return violations;
}

const GestureSequence* LocomotionData::find(Motion m) const {
  for (const auto& s : sequences) {
    if (s.motion == m) return &s;
  }
  return nullptr;
}

LocomotionData parse_locomotion_data(const std::string& text, const std::string& source_name) {
  const FlatConfig cfg = FlatConfig::parse_text(text, source_name);
  LocomotionData data;

  std::map<long, TubeSegment> segs;
  for (const auto& e : cfg.with_prefix("geometry.segment.")) {
    long idx = 0;
    try {
      idx = std::stol(e.key.substr(std::string("geometry.segment.").size()));
    } catch (const std::exception&) {
      throw ParseError(source_name + ": bad segment index in '" + e.key + "'", e.key, e.line);
    }
    std::istringstream in(e.value);
    std::string id_name, start_s, end_s;
    if (!(in >> id_name >> start_s >> end_s))
      throw ParseError(source_name + ": segment entry '" + e.key +
                           "' needs '<id> <start> <end>'",
                       e.key, e.line);
    TubeSegment s;
    s.id = segment_id_from_name(id_name);
    s.span_start = FlatConfig::to_double(start_s, e.key, e.line);
    s.span_end = FlatConfig::to_double(end_s, e.key, e.line);
    segs[idx] = s;
  }
  if (segs.empty()) throw ParseError(source_name + ": no geometry.segment entries", "", 0);
  for (auto& [idx, s] : segs) data.geometry.segments.push_back(s);
  data.geometry.validate();

  for (long si = 0;; ++si) {
    const std::string base = "sequence." + std::to_string(si) + ".";
    const auto motion_key = base + "motion";
    if (!cfg.has(motion_key)) break;
    GestureSequence seq;
    seq.motion = motion_from_name(cfg.require_string(motion_key));
    for (long step = 0;; ++step) {
      const std::string key = base + "step." + std::to_string(step);
      if (!cfg.has(key)) break;
      std::istringstream in(cfg.require_string(key));
      std::string ft_name, tt_name, word;
      if (!(in >> ft_name >> tt_name))
        throw ParseError(source_name + ": step entry '" + key + "' needs '<ft> <tt> [note]'",
                         key, 0);
      GestureStep gs;
      gs.ft = segment_id_from_name(ft_name);
      gs.tt = segment_id_from_name(tt_name);
      std::string note;
      while (in >> word) {
        if (!note.empty()) note += ' ';
        note += word;
      }
      gs.note = note;
      seq.steps.push_back(std::move(gs));
    }
    data.sequences.push_back(std::move(seq));
  }
  return data;
}

LocomotionData load_locomotion_data(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, "", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_locomotion_data(buf.str(), path);
}

}  // namespace rollsim

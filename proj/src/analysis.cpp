#include "rollsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rollsim/flatcfg.hpp"

namespace rollsim {

namespace {

constexpr double kRatioFloor = 1e-6;

std::pair<std::size_t, std::size_t> window_indices(const Trajectory& traj, double t0, double t1) {
  const auto& times = traj.times;
  std::size_t lo = 0;
  while (lo < times.size() && times[lo] < t0) ++lo;
  std::size_t hi = times.size();
  while (hi > lo && times[hi - 1] > t1) --hi;
  return {lo, hi};
}

}  // namespace

RippleStats ripple_stats(const Trajectory& traj, Channel channel, double t0, double t1) {
  const auto [lo, hi] = window_indices(traj, t0, t1);
  if (hi <= lo) throw EmptyWindow("ripple window [" + std::to_string(t0) + ", " +
                                  std::to_string(t1) + "] contains no samples");
  const auto data = traj.channel(channel);
  double sum = 0.0;
  for (std::size_t i = lo; i < hi; ++i) sum += data[i];
  RippleStats out;
  out.mean = sum / static_cast<double>(hi - lo);
  int crossings = 0;
  int prev_sign = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = data[i] - out.mean;
    out.uphill = std::max(out.uphill, d);
    out.downhill = std::max(out.downhill, -d);
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign != 0 && prev_sign != 0 && sign != prev_sign) ++crossings;
    if (sign != 0) prev_sign = sign;
  }
  if (out.uphill > kRatioFloor) out.ratio = out.downhill / out.uphill;
  if (crossings < 4)
    out.diagnostic = "window holds fewer than two ripple periods (" +
                     std::to_string(crossings) + " mean crossings)";
  return out;
}

std::optional<double> settle_time(const Trajectory& traj, Channel channel, double threshold) {
  if (!(threshold > 0.0)) throw ValidationError("settle threshold must be > 0");
  const auto data = traj.channel(channel);
  // last sample at or above threshold; settled from the next sample on
  std::size_t last_above = data.size();
  for (std::size_t i = data.size(); i-- > 0;) {
    if (std::abs(data[i]) >= threshold) {
      last_above = i;
      break;
    }
  }
  if (last_above == data.size()) return 0.0;        // never reached threshold
  if (last_above + 1 >= data.size()) return std::nullopt;  // still above at the end
  return traj.times[last_above + 1];
}

bool waving_flag(const Trajectory& traj, Channel channel, double t0) {
  const auto [lo, hi] = window_indices(traj, t0, traj.times.empty() ? t0 : traj.times.back());
  if (hi <= lo) return false;
  const auto data = traj.channel(channel);
  double sum = 0.0;
  for (std::size_t i = lo; i < hi; ++i) sum += data[i];
  const double mean = sum / static_cast<double>(hi - lo);
  double up = 0.0, down = 0.0;
  int crossings = 0;
  int prev_sign = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = data[i] - mean;
    up = std::max(up, d);
    down = std::max(down, -d);
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign != 0 && prev_sign != 0 && sign != prev_sign) ++crossings;
    if (sign != 0) prev_sign = sign;
  }
  if (std::abs(mean) < kRatioFloor) return false;
  return crossings >= 4 && (up + down) >= std::abs(mean);
}

ComparisonReport compare(const Trajectory& a, const Trajectory& b) {
  // common samples: matching times within rounding of the uniform grids
  constexpr double kTimeTol = 1e-9;
  ComparisonReport rep;
  static const Channel kChannels[] = {Channel::theta, Channel::theta_dot, Channel::gamma,
                                      Channel::gamma_dot, Channel::energy};

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j < b.times.size() && b.times[j] < a.times[i] - kTimeTol) ++j;
    if (j < b.times.size() && std::abs(b.times[j] - a.times[i]) <= kTimeTol)
      pairs.emplace_back(i, j);
  }
  if (pairs.empty()) throw NoOverlap("trajectories share no common sample times");

  rep.common_samples = pairs.size();
  rep.overlap_start = a.times[pairs.front().first];
  rep.overlap_end = a.times[pairs.back().first];

  for (const Channel c : kChannels) {
    const auto da = a.channel(c);
    const auto db = b.channel(c);
    double sq = 0.0;
    for (const auto& [ia, ib] : pairs) {
      const double d = da[ia] - db[ib];
      sq += d * d;
    }
    ComparisonReport::ChannelDelta delta;
    delta.name = channel_name(c);
    delta.rms = std::sqrt(sq / static_cast<double>(pairs.size()));
    delta.final_delta = da[pairs.back().first] - db[pairs.back().second];
    rep.channels.push_back(delta);
  }

  const double final_a = a.theta[pairs.back().first];
  const double final_b = b.theta[pairs.back().second];
  std::ostringstream verdict;
  if (final_a < final_b)
    verdict << "first run ends " << format_double(final_b - final_a)
            << " rad short of the second";
  else if (final_a > final_b)
    verdict << "second run ends " << format_double(final_a - final_b)
            << " rad short of the first";
  else
    verdict << "both runs end at the same sphere displacement";
  rep.verdicts.push_back(verdict.str());
  return rep;
}

double ComparisonReport::rms_of(const std::string& name) const {
  for (const auto& c : channels) {
    if (c.name == name) return c.rms;
  }
  throw ValidationError("comparison report has no channel " + name);
}

double ComparisonReport::max_state_rms() const {
  double m = 0.0;
  for (const auto& c : channels) {
    if (c.name != "energy") m = std::max(m, c.rms);
  }
  return m;
}

std::string render_comparison_text(const ComparisonReport& rep) {
  std::ostringstream out;
  out << "comparison over [" << format_double(rep.overlap_start) << ", "
      << format_double(rep.overlap_end) << "] s, " << rep.common_samples
      << " common samples\n";
  for (const auto& c : rep.channels) {
    out << "  " << c.name << ": rms " << format_double(c.rms) << ", final delta "
        << format_double(c.final_delta) << "\n";
  }
  for (const auto& v : rep.verdicts) out << "  " << v << "\n";
  return out.str();
}

std::string render_comparison_kv(const ComparisonReport& rep) {
  FlatConfig cfg;
  cfg.set_double("compare.overlap_start", rep.overlap_start);
  cfg.set_double("compare.overlap_end", rep.overlap_end);
  cfg.set_long("compare.common_samples", static_cast<long>(rep.common_samples));
  for (const auto& c : rep.channels) {
    cfg.set_double("compare.rms." + c.name, c.rms);
    cfg.set_double("compare.final_delta." + c.name, c.final_delta);
  }
  for (std::size_t i = 0; i < rep.verdicts.size(); ++i)
    cfg.set("compare.verdict." + std::to_string(i), rep.verdicts[i]);
  return cfg.serialize();
}

}  // namespace rollsim

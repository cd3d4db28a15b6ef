#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rollsim/integrate.hpp"

namespace rollsim {

// Excursion statistics of a channel over an analysis window, measured after
// removing the window mean. "Uphill" is the largest excursion above the mean,
// "downhill" the largest below it.
struct RippleStats {
  double mean = 0.0;
  double uphill = 0.0;
  double downhill = 0.0;
  std::optional<double> ratio;  // downhill / uphill, defined when uphill > 1e-6
  // Set when the window holds fewer than two mean crossings per direction,
  // i.e. likely spans less than two ripple periods.
  std::optional<std::string> diagnostic;
};

// Throws EmptyWindow if [t0, t1] contains no samples.
RippleStats ripple_stats(const Trajectory& traj, Channel channel, double t0, double t1);

// First time after which |channel| stays below threshold through the end of
// the trajectory; nullopt if it never settles.
std::optional<double> settle_time(const Trajectory& traj, Channel channel, double threshold);

// Qualitative "waving" flag: the channel's mean-removed excursion band exceeds
// the magnitude of its window mean (and the signal crosses that mean at least
// four times) over [t0, end]. Captures oscillation dominating the drift.
bool waving_flag(const Trajectory& traj, Channel channel, double t0);

// Per-channel comparison of two trajectories on their overlapping time range.
struct ComparisonReport {
  struct ChannelDelta {
    std::string name;
    double rms = 0.0;          // RMS of a-b over the common samples
    double final_delta = 0.0;  // a-b at the last common sample (signed)
  };
  std::vector<ChannelDelta> channels;
  double overlap_start = 0.0;
  double overlap_end = 0.0;
  std::size_t common_samples = 0;
  std::vector<std::string> verdicts;

  double rms_of(const std::string& channel_name) const;   // throws ValidationError
  double max_state_rms() const;  // max over theta, theta_dot, gamma, gamma_dot
};

// Throws NoOverlap when the time ranges do not intersect on common samples.
ComparisonReport compare(const Trajectory& a, const Trajectory& b);

std::string render_comparison_text(const ComparisonReport& report);
std::string render_comparison_kv(const ComparisonReport& report);

}  // namespace rollsim

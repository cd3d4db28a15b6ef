#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rollsim/dynamics.hpp"
#include "rollsim/torque.hpp"

namespace rollsim {

enum class FrictionModel { frictionless, frictional };

struct SimConfig {
  double dt = 1e-4;          // s, fixed step; 0 < dt <= 0.01
  double t_end = 10.0;       // s
  int record_every = 10;     // record every n-th step
  FrictionModel model = FrictionModel::frictionless;
  PlanarState initial_state;

  void validate() const;
  // Number of integration steps, round(t_end / dt).
  long step_count() const;
};

// Named trajectory channels (uniform sampling at dt * record_every).
enum class Channel {
  time,
  theta,
  theta_dot,   // sphere velocity
  gamma,
  gamma_dot,   // core velocity
  torque,
  energy,
  sphere_y,
  core_y,
  core_z,
  momentum_y,
  momentum_z,
};

Channel channel_from_name(const std::string& name);  // throws ValidationError
std::string channel_name(Channel c);

// Uniformly sampled simulation output. All channels have equal length; times
// are strictly increasing with spacing dt * record_every.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> theta, theta_dot, gamma, gamma_dot;
  std::vector<double> torque, energy;
  std::vector<double> sphere_y, core_y, core_z, momentum_y, momentum_z;
  bool aborted = false;        // set when integration hit a non-finite state
  std::string abort_reason;

  std::size_t size() const { return times.size(); }
  std::span<const double> channel(Channel c) const;
  PlanarState state_at(std::size_t i) const {
    return {theta[i], theta_dot[i], gamma[i], gamma_dot[i]};
  }
};

// One classical fourth-order Runge-Kutta step from (state, t) to t + dt.
// Torque is evaluated exactly at substep times; the final stage uses the
// profile's left limit at t + dt so that a jump landing exactly on a step
// boundary integrates with the value that governed the elapsed interval.
// Throws NonFiniteState if the result is not finite.
PlanarState rk4_step(const DerivedConstants& k, FrictionModel model, double zeta,
                     const PlanarState& state, double t, double dt,
                     const TorqueProfile& profile);

// Deterministic fixed-step integration. Identical inputs yield bit-identical
// trajectories. A non-finite state aborts with the partial trajectory and the
// aborted flag set.
Trajectory simulate(const RobotParams& params, const SimConfig& config,
                    const TorqueProfile& profile);

}  // namespace rollsim

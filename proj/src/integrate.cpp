#include "rollsim/integrate.hpp"

#include <cmath>

namespace rollsim {

void SimConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.01)) throw ValidationError("sim.dt must be in (0, 0.01]");
  if (!(t_end > 0.0)) throw ValidationError("sim.t_end must be > 0");
  if (record_every < 1) throw ValidationError("sim.record_every must be >= 1");
  if (!(dt * record_every <= t_end))
    throw ValidationError("sim.dt * sim.record_every must not exceed sim.t_end");
  if (!initial_state.finite()) throw ValidationError("initial state must be finite");
}

long SimConfig::step_count() const { return std::lround(t_end / dt); }

Channel channel_from_name(const std::string& name) {
  if (name == "time" || name == "t") return Channel::time;
  if (name == "theta" || name == "sphere_displacement") return Channel::theta;
  if (name == "theta_dot" || name == "sphere_velocity") return Channel::theta_dot;
  if (name == "gamma" || name == "core_displacement") return Channel::gamma;
  if (name == "gamma_dot" || name == "core_velocity") return Channel::gamma_dot;
  if (name == "tau" || name == "torque") return Channel::torque;
  if (name == "energy") return Channel::energy;
  if (name == "sphere_y") return Channel::sphere_y;
  if (name == "core_y") return Channel::core_y;
  if (name == "core_z") return Channel::core_z;
  if (name == "p_y" || name == "momentum_y") return Channel::momentum_y;
  if (name == "p_z" || name == "momentum_z") return Channel::momentum_z;
  throw ValidationError("unknown channel: " + name);
}

std::string channel_name(Channel c) {
  switch (c) {
    case Channel::time: return "time";
    case Channel::theta: return "theta";
    case Channel::theta_dot: return "theta_dot";
    case Channel::gamma: return "gamma";
    case Channel::gamma_dot: return "gamma_dot";
    case Channel::torque: return "tau";
    case Channel::energy: return "energy";
    case Channel::sphere_y: return "sphere_y";
    case Channel::core_y: return "core_y";
    case Channel::core_z: return "core_z";
    case Channel::momentum_y: return "p_y";
    case Channel::momentum_z: return "p_z";
  }
  throw ValidationError("bad channel enum");
}

std::span<const double> Trajectory::channel(Channel c) const {
  switch (c) {
    case Channel::time: return times;
    case Channel::theta: return theta;
    case Channel::theta_dot: return theta_dot;
    case Channel::gamma: return gamma;
    case Channel::gamma_dot: return gamma_dot;
    case Channel::torque: return torque;
    case Channel::energy: return energy;
    case Channel::sphere_y: return sphere_y;
    case Channel::core_y: return core_y;
    case Channel::core_z: return core_z;
    case Channel::momentum_y: return momentum_y;
    case Channel::momentum_z: return momentum_z;
  }
  throw ValidationError("bad channel enum");
}

namespace {

inline StateRates rates(const DerivedConstants& k, FrictionModel model, double zeta,
                        const PlanarState& s, double tau) {
  return model == FrictionModel::frictional ? frictional_rates(k, s, tau, zeta)
                                            : frictionless_rates(k, s, tau);
}

inline PlanarState advance(const PlanarState& s, const StateRates& r, double dt) {
  return {s.theta + dt * r.d_theta, s.theta_dot + dt * r.d_theta_dot,
          s.gamma + dt * r.d_gamma, s.gamma_dot + dt * r.d_gamma_dot};
}

}  // namespace

PlanarState rk4_step(const DerivedConstants& k, FrictionModel model, double zeta,
                     const PlanarState& state, double t, double dt,
                     const TorqueProfile& profile) {
  const double tau0 = profile.value(t);
  const double tau_mid = profile.value(t + 0.5 * dt);
  const double tau1 = profile.value_from_left(t + dt);

  const StateRates k1 = rates(k, model, zeta, state, tau0);
  const StateRates k2 = rates(k, model, zeta, advance(state, k1, 0.5 * dt), tau_mid);
  const StateRates k3 = rates(k, model, zeta, advance(state, k2, 0.5 * dt), tau_mid);
  const StateRates k4 = rates(k, model, zeta, advance(state, k3, dt), tau1);

  PlanarState out;
  out.theta = state.theta + dt / 6.0 * (k1.d_theta + 2.0 * (k2.d_theta + k3.d_theta) + k4.d_theta);
  out.theta_dot = state.theta_dot +
                  dt / 6.0 * (k1.d_theta_dot + 2.0 * (k2.d_theta_dot + k3.d_theta_dot) + k4.d_theta_dot);
  out.gamma = state.gamma + dt / 6.0 * (k1.d_gamma + 2.0 * (k2.d_gamma + k3.d_gamma) + k4.d_gamma);
  out.gamma_dot = state.gamma_dot +
                  dt / 6.0 * (k1.d_gamma_dot + 2.0 * (k2.d_gamma_dot + k3.d_gamma_dot) + k4.d_gamma_dot);
  if (!out.finite()) throw NonFiniteState("rk4_step produced a non-finite state");
  return out;
}

Trajectory simulate(const RobotParams& params, const SimConfig& config,
                    const TorqueProfile& profile) {
  config.validate();
  const DerivedConstants k = validate_and_derive(params);
  const double zeta = params.viscous_zeta;
  const long n = config.step_count();
  const long rec = config.record_every;

  Trajectory traj;
  const std::size_t samples = static_cast<std::size_t>(n / rec) + 1;
  traj.times.reserve(samples);
  traj.theta.reserve(samples);
  traj.theta_dot.reserve(samples);
  traj.gamma.reserve(samples);
  traj.gamma_dot.reserve(samples);
  traj.torque.reserve(samples);
  traj.energy.reserve(samples);
  traj.sphere_y.reserve(samples);
  traj.core_y.reserve(samples);
  traj.core_z.reserve(samples);
  traj.momentum_y.reserve(samples);
  traj.momentum_z.reserve(samples);

  auto record = [&](long step, const PlanarState& s) {
    const double t = static_cast<double>(step) * config.dt;
    const WorldKinematics w = world_kinematics(params, s);
    traj.times.push_back(t);
    traj.theta.push_back(s.theta);
    traj.theta_dot.push_back(s.theta_dot);
    traj.gamma.push_back(s.gamma);
    traj.gamma_dot.push_back(s.gamma_dot);
    traj.torque.push_back(profile.value(t));
    traj.energy.push_back(total_energy(params, s));
    traj.sphere_y.push_back(w.sphere_y);
    traj.core_y.push_back(w.core_y);
    traj.core_z.push_back(w.core_z);
    traj.momentum_y.push_back(w.momentum_y);
    traj.momentum_z.push_back(w.momentum_z);
  };

  PlanarState state = config.initial_state;
  record(0, state);
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * config.dt;
    try {
      state = rk4_step(k, config.model, zeta, state, t, config.dt, profile);
    } catch (const NonFiniteState& e) {
      traj.aborted = true;
      traj.abort_reason = e.what();
      break;
    }
    if ((i + 1) % rec == 0) record(i + 1, state);
  }
  return traj;
}

}  // namespace rollsim

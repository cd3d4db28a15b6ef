#include "rollsim/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rollsim {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParams(msg);
}

}  // namespace

void RobotParams::validate() const {
  require(std::isfinite(gravity) && gravity > 0.0, "gravity must be > 0");
  require(std::isfinite(sphere_mass) && sphere_mass > 0.0, "sphere_mass must be > 0");
  require(std::isfinite(core_mass) && core_mass >= 0.0, "core_mass must be >= 0");
  require(std::isfinite(sphere_radius) && sphere_radius > 0.0, "sphere_radius must be > 0");
  require(std::isfinite(core_orbit_radius) && core_orbit_radius > 0.0,
          "core_orbit_radius must be > 0");
  require(core_orbit_radius < sphere_radius, "core_orbit_radius must be < sphere_radius");
  require(std::isfinite(sphere_inertia) && sphere_inertia > 0.0, "sphere_inertia must be > 0");
  require(std::isfinite(core_inertia) && core_inertia > 0.0, "core_inertia must be > 0");
  require(std::isfinite(viscous_zeta) && viscous_zeta >= 0.0, "viscous_zeta must be >= 0");
}

DerivedConstants validate_and_derive(const RobotParams& p) {
  p.validate();
  const double R2 = p.sphere_radius * p.sphere_radius;
  const double r2 = p.core_orbit_radius * p.core_orbit_radius;
  DerivedConstants k;
  k.inertia_sum = p.sphere_mass * R2 + p.sphere_inertia + p.core_mass * R2 +
                  p.core_inertia + p.core_mass * r2;
  k.coupling = p.core_mass * p.sphere_radius * p.core_orbit_radius;
  k.core_moment = p.core_inertia + p.core_mass * r2;
  k.gravity_moment = p.core_mass * p.gravity * p.core_orbit_radius;
  if (!(k.min_inertia_det() > 0.0)) {
    throw SingularMassMatrix("mass matrix not positive definite: min E(phase) = " +
                             std::to_string(k.min_inertia_det()));
  }
  return k;
}

double shell_inertia(double mass, double radius) {
  if (!(mass >= 0.0) || !(radius >= 0.0))
    throw InvalidParams("shell_inertia: mass and radius must be non-negative");
  return (2.0 / 3.0) * mass * radius * radius;
}

double solid_sphere_inertia(double mass, double radius) {
  if (!(mass >= 0.0) || !(radius >= 0.0))
    throw InvalidParams("solid_sphere_inertia: mass and radius must be non-negative");
  return (2.0 / 5.0) * mass * radius * radius;
}

StateRates frictionless_rates(const DerivedConstants& k, const PlanarState& s, double tau) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double a = k.inertia_sum;
  const double b = k.coupling;
  const double D = k.core_moment;
  const double h = k.gravity_moment;
  const double B = D + b * c;
  const double E = k.inertia_det(phase);
  if (!(E > 0.0)) {
    if (!std::isfinite(E)) throw NonFiniteState("frictionless_rates: non-finite state");
    throw SingularMassMatrix("frictionless_rates: E(phase) <= 0");
  }
  const double sq = (s.theta_dot + s.gamma_dot) * (s.theta_dot + s.gamma_dot);

  StateRates out;
  out.d_theta = s.theta_dot;
  out.d_gamma = s.gamma_dot;
  out.d_theta_dot = b * sn * (sq * D + h * c) / E - B / E * tau;
  out.d_gamma_dot =
      -sn * (b * sq * B + ((a - D) + b * c) * h) / E + (a + 2.0 * b * c) / E * tau;
  return out;
}

StateRates frictional_rates(const DerivedConstants& k, const PlanarState& s, double tau,
                            double zeta) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double a = k.inertia_sum;
  const double b = k.coupling;
  const double D = k.core_moment;
  const double h = k.gravity_moment;
  const double B = D + b * c;
  const double A = a + 2.0 * b * c;
  const double E = k.inertia_det(phase);
  if (!(E > 0.0)) {
    if (!std::isfinite(E)) throw NonFiniteState("frictional_rates: non-finite state");
    throw SingularMassMatrix("frictional_rates: E(phase) <= 0");
  }
  const double sq = (s.theta_dot + s.gamma_dot) * (s.theta_dot + s.gamma_dot);

  StateRates out;
  out.d_theta = s.theta_dot;
  out.d_gamma = s.gamma_dot;
  out.d_theta_dot = b * sn * (sq * D + h * c) / E +
                    (s.gamma_dot * B - s.theta_dot * D) / E * zeta - B / E * tau;
  out.d_gamma_dot = -sn * (b * sq * B + ((a - D) + b * c) * h) / E +
                    (s.theta_dot * B - s.gamma_dot * A) / E * zeta + A / E * tau;
  return out;
}

StateRates frictionless_rates(const RobotParams& p, const PlanarState& s, double tau) {
  return frictionless_rates(validate_and_derive(p), s, tau);
}

StateRates frictional_rates(const RobotParams& p, const PlanarState& s, double tau) {
  return frictional_rates(validate_and_derive(p), s, tau, p.viscous_zeta);
}

MassMatrixForm assemble_matrix_form(const DerivedConstants& k, const PlanarState& s,
                                    double tau, double zeta) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double sq = (s.theta_dot + s.gamma_dot) * (s.theta_dot + s.gamma_dot);

  MassMatrixForm f;
  f.m11 = k.inertia_sum + 2.0 * k.coupling * c;
  f.m12 = k.core_moment + k.coupling * c;
  f.m22 = k.core_moment;
  f.n1 = -sq * k.coupling * sn + zeta * s.theta_dot;
  f.n2 = zeta * s.gamma_dot;
  f.g1 = k.gravity_moment * sn;
  f.g2 = k.gravity_moment * sn;
  f.tau1 = 0.0;
  f.tau2 = tau;
  return f;
}

Accelerations solve_matrix_form(const MassMatrixForm& f) {
  const double det = f.m11 * f.m22 - f.m12 * f.m12;
  const double trace = f.m11 + f.m22;
  if (det <= 1e-12 * trace * trace) {
    throw SingularMassMatrix("2x2 mass matrix solve: det " + std::to_string(det) +
                             " below tolerance");
  }
  const double rhs1 = f.tau1 - f.n1 - f.g1;
  const double rhs2 = f.tau2 - f.n2 - f.g2;
  Accelerations acc;
  acc.theta_ddot = (f.m22 * rhs1 - f.m12 * rhs2) / det;
  acc.gamma_ddot = (f.m11 * rhs2 - f.m12 * rhs1) / det;
  return acc;
}

Accelerations mass_matrix_solve(const DerivedConstants& k, const PlanarState& s, double tau,
                                double zeta) {
  return solve_matrix_form(assemble_matrix_form(k, s, tau, zeta));
}

Accelerations mass_matrix_solve(const RobotParams& p, const PlanarState& s, double tau,
                                double zeta) {
  return mass_matrix_solve(validate_and_derive(p), s, tau, zeta);
}

double total_energy(const RobotParams& p, const PlanarState& s) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double w = s.theta_dot + s.gamma_dot;  // core angular rate
  const double core_vy = p.sphere_radius * s.theta_dot + w * p.core_orbit_radius * c;
  const double core_vz = -w * p.core_orbit_radius * sn;
  const double kinetic =
      0.5 * p.sphere_mass * (p.sphere_radius * s.theta_dot) * (p.sphere_radius * s.theta_dot) +
      0.5 * p.sphere_inertia * s.theta_dot * s.theta_dot +
      0.5 * p.core_mass * (core_vy * core_vy + core_vz * core_vz) +
      0.5 * p.core_inertia * w * w;
  const double potential = -p.core_mass * p.gravity * p.core_orbit_radius * c;
  return kinetic + potential;
}

double lagrangian(const RobotParams& p, const PlanarState& s) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double R2 = p.sphere_radius * p.sphere_radius;
  const double r2 = p.core_orbit_radius * p.core_orbit_radius;
  const double w = s.theta_dot + s.gamma_dot;
  const double b = p.core_mass * p.sphere_radius * p.core_orbit_radius;
  const double h = p.core_mass * p.gravity * p.core_orbit_radius;
  return 0.5 * s.theta_dot * s.theta_dot * (p.sphere_mass * R2 + p.sphere_inertia + p.core_mass * R2) +
         0.5 * w * w * (p.core_inertia + p.core_mass * r2) +
         (s.theta_dot * s.gamma_dot + s.theta_dot * s.theta_dot) * b * c + h * c;
}

std::array<double, 4> lagrangian_partials(const RobotParams& p, const PlanarState& s) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double R2 = p.sphere_radius * p.sphere_radius;
  const double r2 = p.core_orbit_radius * p.core_orbit_radius;
  const double b = p.core_mass * p.sphere_radius * p.core_orbit_radius;
  const double h = p.core_mass * p.gravity * p.core_orbit_radius;
  const double shell_term = p.sphere_mass * R2 + p.sphere_inertia + p.core_mass * R2;
  const double core_term = p.core_inertia + p.core_mass * r2;
  const double w = s.theta_dot + s.gamma_dot;

  const double d_angle =
      -((s.theta_dot * s.gamma_dot + s.theta_dot * s.theta_dot) * b + h) * sn;
  return {
      d_angle,                                                                    // dL/dtheta
      shell_term * s.theta_dot + core_term * w + b * (s.gamma_dot + 2.0 * s.theta_dot) * c,
      d_angle,                                                                    // dL/dgamma
      core_term * w + b * s.theta_dot * c,
  };
}

WorldKinematics world_kinematics(const RobotParams& p, const PlanarState& s) {
  const double phase = s.phase();
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double w = s.theta_dot + s.gamma_dot;

  WorldKinematics out;
  out.sphere_y = p.sphere_radius * s.theta;
  out.sphere_z = p.sphere_radius;
  out.core_y = out.sphere_y + p.core_orbit_radius * sn;
  out.core_z = out.sphere_z + p.core_orbit_radius * c;
  out.core_vy = p.sphere_radius * s.theta_dot + w * p.core_orbit_radius * c;
  out.core_vz = -w * p.core_orbit_radius * sn;
  out.momentum_y = p.sphere_mass * p.sphere_radius * s.theta_dot + p.core_mass * out.core_vy;
  out.momentum_z = p.core_mass * out.core_vz;
  return out;
}

double arc_distance(double radius, double theta_deg) {
  if (!(radius > 0.0)) throw InvalidParams("arc_distance: radius must be > 0");
  return 2.0 * std::numbers::pi * radius / 360.0 * theta_deg;
}

}  // namespace rollsim

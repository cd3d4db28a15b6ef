#pragma once

#include <array>
#include <cmath>

#include "rollsim/errors.hpp"

namespace rollsim {

// Physical constants of the shell-and-core pair. Defaults are the desk-scale
// reference setup (3 kg shell of radius 0.36 m, 1 kg core orbiting at 0.317 m).
struct RobotParams {
  double gravity = 9.8;             // m/s^2
  double sphere_mass = 3.0;         // kg
  double core_mass = 1.0;           // kg (defaults to sphere_mass/3; override allowed)
  double sphere_radius = 0.36;      // m
  double core_orbit_radius = 0.317; // m, distance sphere center -> core center
  double sphere_inertia = 0.2592;   // kg m^2, thin shell about its center
  double core_inertia = 0.0402;     // kg m^2
  double viscous_zeta = 0.8;        // N m s/rad, viscous friction coefficient

  // Throws InvalidParams on non-positive values or core orbit outside the shell.
  // core_mass == 0 is accepted (degenerates to a freely rolling shell).
  void validate() const;
};

// Shorthand scalars of the equations of motion, fixed once per parameter set.
//   inertia_sum    a = Ms R^2 + Is + mc R^2 + Ic + mc r^2
//   coupling       b = mc R r
//   core_moment    D = Ic + mc r^2          (core inertia about the sphere center)
//   gravity_moment h = mc g r
// The phase-dependent forms, with phase = theta + gamma:
//   A(phase) = a + 2 b cos(phase)
//   B(phase) = D + b cos(phase)
//   E(phase) = A D - B^2 = D (a - D) - b^2 cos^2(phase)
struct DerivedConstants {
  double inertia_sum = 0.0;
  double coupling = 0.0;
  double core_moment = 0.0;
  double gravity_moment = 0.0;

  double effective_inertia(double phase) const {
    return inertia_sum + 2.0 * coupling * std::cos(phase);
  }
  double effective_coupling(double phase) const {
    return core_moment + coupling * std::cos(phase);
  }
  double inertia_det(double phase) const {
    const double c = std::cos(phase);
    return core_moment * (inertia_sum - core_moment) - coupling * coupling * c * c;
  }
  // Exact minimum of inertia_det over all phases (attained at cos^2 = 1).
  double min_inertia_det() const {
    return core_moment * (inertia_sum - core_moment) - coupling * coupling;
  }
};

// Validates params and computes the derived constants; additionally asserts
// positive definiteness of the mass matrix for every phase (min E > 0).
DerivedConstants validate_and_derive(const RobotParams& params);

// Moment of inertia of a thin spherical shell, (2/3) m R^2.
double shell_inertia(double mass, double radius);
// Moment of inertia of a solid sphere, (2/5) m r^2.
double solid_sphere_inertia(double mass, double radius);

// Rolling state: sphere roll angle theta and core locomotion angle gamma, with
// rates. Angles accumulate without wrapping (displacement is cumulative).
struct PlanarState {
  double theta = 0.0;      // rad
  double theta_dot = 0.0;  // rad/s
  double gamma = 0.0;      // rad
  double gamma_dot = 0.0;  // rad/s

  bool finite() const {
    return std::isfinite(theta) && std::isfinite(theta_dot) &&
           std::isfinite(gamma) && std::isfinite(gamma_dot);
  }
  double phase() const { return theta + gamma; }
};

// Time derivative of PlanarState.
struct StateRates {
  double d_theta = 0.0;
  double d_theta_dot = 0.0;
  double d_gamma = 0.0;
  double d_gamma_dot = 0.0;
};

// Closed-form state derivatives of the undamped model.
StateRates frictionless_rates(const DerivedConstants& k, const PlanarState& s, double tau);
// Closed-form state derivatives with viscous friction coefficient zeta.
// With zeta == 0 this reduces exactly (term-by-term) to frictionless_rates.
StateRates frictional_rates(const DerivedConstants& k, const PlanarState& s, double tau,
                            double zeta);

// Convenience overloads that derive constants on the fly.
StateRates frictionless_rates(const RobotParams& p, const PlanarState& s, double tau);
StateRates frictional_rates(const RobotParams& p, const PlanarState& s, double tau);

// The compact matrix form M qdd + N + G = [0, tau]^T of the equations of motion.
struct MassMatrixForm {
  double m11 = 0.0, m12 = 0.0, m22 = 0.0;  // symmetric: m21 == m12
  double n1 = 0.0, n2 = 0.0;               // velocity-dependent terms
  double g1 = 0.0, g2 = 0.0;               // gravity terms
  double tau1 = 0.0, tau2 = 0.0;           // input vector [0, tau]
};

MassMatrixForm assemble_matrix_form(const DerivedConstants& k, const PlanarState& s,
                                    double tau, double zeta);

// Accelerations (theta_ddot, gamma_ddot).
struct Accelerations {
  double theta_ddot = 0.0;
  double gamma_ddot = 0.0;
};

// Solves M qdd = [0,tau]^T - N - G by direct 2x2 inversion. Independent of the
// closed-form path above; serves as its in-repo oracle.
// Throws SingularMassMatrix when det(M) <= 1e-12 * trace(M)^2.
Accelerations solve_matrix_form(const MassMatrixForm& f);
Accelerations mass_matrix_solve(const RobotParams& p, const PlanarState& s, double tau,
                                double zeta);
Accelerations mass_matrix_solve(const DerivedConstants& k, const PlanarState& s, double tau,
                                double zeta);

// Kinetic plus potential energy; the potential is -mc g r cos(theta + gamma),
// zero at core level with the sphere center.
double total_energy(const RobotParams& p, const PlanarState& s);

// Scalar Lagrangian L = Ek - Ep of the planar model.
double lagrangian(const RobotParams& p, const PlanarState& s);
// Analytic partials of L with respect to (theta, theta_dot, gamma, gamma_dot).
std::array<double, 4> lagrangian_partials(const RobotParams& p, const PlanarState& s);

// World-frame (y: travel direction, z: up) positions and derived channels.
struct WorldKinematics {
  double sphere_y = 0.0, sphere_z = 0.0;  // sphere center, z is always R
  double core_y = 0.0, core_z = 0.0;      // core center
  double core_vy = 0.0, core_vz = 0.0;    // core velocity
  double momentum_y = 0.0, momentum_z = 0.0;  // system translational momentum
};

WorldKinematics world_kinematics(const RobotParams& p, const PlanarState& s);

// Ground distance covered by a rolling sphere of radius R over an angle given
// in degrees: d = 2 pi R theta_deg / 360.
double arc_distance(double radius, double theta_deg);

}  // namespace rollsim

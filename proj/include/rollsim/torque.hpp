#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "rollsim/errors.hpp"

namespace rollsim {

// Cubic smooth step: h0 for x <= x0, h1 for x >= x1, Hermite blend between.
struct SmoothStep {
  double x0 = 0.0;
  double h0 = 0.0;
  double x1 = 1.0;
  double h1 = 1.0;

  void validate() const {
    if (!(x1 > x0)) throw ValidationError("SmoothStep requires x1 > x0");
  }
  double value(double x) const {
    if (x <= x0) return h0;
    if (x >= x1) return h1;
    const double d = (x - x0) / (x1 - x0);
    return h0 + (h1 - h0) * d * d * (3.0 - 2.0 * d);
  }
};

struct ConstantTorque {
  double value = 0.0;
};

// Contributes amplitude on [start, start + duration), zero elsewhere.
struct PulseTorque {
  double amplitude = 0.0;
  double start = 0.0;
  double duration = 0.0;
};

// Right-continuous step function: value_i on [t_i, t_{i+1}), zero before the
// first knot. Knot times must be strictly increasing.
struct PiecewiseTorque {
  std::vector<std::pair<double, double>> knots;  // (t_start, value)
};

// Weighted sum of smooth steps plus a constant offset. Linear compositions of
// scaled/summed steps flatten into this form.
struct SmoothStepExpr {
  double offset = 0.0;
  std::vector<std::pair<double, SmoothStep>> terms;  // (coefficient, step)

  double value(double x) const {
    double v = offset;
    for (const auto& [coef, step] : terms) v += coef * step.value(x);
    return v;
  }
};

// Time-parameterized input torque tau(t), defined for all t >= 0.
class TorqueProfile {
 public:
  using Variant = std::variant<ConstantTorque, PulseTorque, PiecewiseTorque, SmoothStepExpr>;

  TorqueProfile() : v_(ConstantTorque{0.0}) {}
  explicit TorqueProfile(Variant v);

  static TorqueProfile constant(double value);
  static TorqueProfile pulse(double amplitude, double start, double duration);
  static TorqueProfile piecewise(std::vector<std::pair<double, double>> knots);
  static TorqueProfile smooth_steps(SmoothStepExpr expr);

  // Value at t, using right-continuous semantics at discontinuities.
  double value(double t) const;
  // Left limit at t: the value governing an interval that ends at t. Equal to
  // value(t) everywhere a profile is continuous.
  double value_from_left(double t) const;

  const Variant& raw() const { return v_; }

 private:
  Variant v_;
};

// Value of a torque profile at time t (right-continuous at jumps).
inline double eval_torque(const TorqueProfile& profile, double t) { return profile.value(t); }

}  // namespace rollsim

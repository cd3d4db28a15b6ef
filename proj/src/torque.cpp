#include "rollsim/torque.hpp"

#include <cmath>

namespace rollsim {

namespace {

void validate_variant(const TorqueProfile::Variant& v) {
  if (const auto* p = std::get_if<PulseTorque>(&v)) {
    if (!(std::isfinite(p->amplitude) && std::isfinite(p->start) && p->duration >= 0.0))
      throw ValidationError("pulse torque requires finite amplitude/start and duration >= 0");
  } else if (const auto* pw = std::get_if<PiecewiseTorque>(&v)) {
    for (size_t i = 0; i + 1 < pw->knots.size(); ++i) {
      if (!(pw->knots[i].first < pw->knots[i + 1].first))
        throw ValidationError("piecewise torque knots must be strictly increasing");
    }
  } else if (const auto* e = std::get_if<SmoothStepExpr>(&v)) {
    for (const auto& [coef, step] : e->terms) {
      (void)coef;
      step.validate();
    }
  }
}

}  // namespace

TorqueProfile::TorqueProfile(Variant v) : v_(std::move(v)) { validate_variant(v_); }

TorqueProfile TorqueProfile::constant(double value) {
  return TorqueProfile(Variant{ConstantTorque{value}});
}

TorqueProfile TorqueProfile::pulse(double amplitude, double start, double duration) {
  return TorqueProfile(Variant{PulseTorque{amplitude, start, duration}});
}

TorqueProfile TorqueProfile::piecewise(std::vector<std::pair<double, double>> knots) {
  return TorqueProfile(Variant{PiecewiseTorque{std::move(knots)}});
}

TorqueProfile TorqueProfile::smooth_steps(SmoothStepExpr expr) {
  return TorqueProfile(Variant{std::move(expr)});
}

double TorqueProfile::value(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantTorque>) {
          return p.value;
        } else if constexpr (std::is_same_v<T, PulseTorque>) {
          return (t >= p.start && t < p.start + p.duration) ? p.amplitude : 0.0;
        } else if constexpr (std::is_same_v<T, PiecewiseTorque>) {
          double v = 0.0;
          for (const auto& [ts, val] : p.knots) {
            if (t >= ts) v = val;
            else break;
          }
          return v;
        } else {
          return p.value(t);
        }
      },
      v_);
}

double TorqueProfile::value_from_left(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantTorque>) {
          return p.value;
        } else if constexpr (std::is_same_v<T, PulseTorque>) {
          return (t > p.start && t <= p.start + p.duration) ? p.amplitude : 0.0;
        } else if constexpr (std::is_same_v<T, PiecewiseTorque>) {
          double v = 0.0;
          for (const auto& [ts, val] : p.knots) {
            if (t > ts) v = val;
            else break;
          }
          return v;
        } else {
          return p.value(t);  // continuous
        }
      },
      v_);
}

}  // namespace rollsim

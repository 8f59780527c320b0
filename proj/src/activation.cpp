#include "statnet/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace statnet {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_interior(ActivationKind kind, double v, const char* who) {
  const bool ok = kind == ActivationKind::bipolar ? (v > -1.0 && v < 1.0) : (v > 0.0 && v < 1.0);
  if (!ok || std::isnan(v)) {
    throw std::invalid_argument(std::string(who) + ": activation " + std::to_string(v) +
                                " is not strictly inside the " +
                                (kind == ActivationKind::bipolar ? "(-1, 1)" : "(0, 1)") +
                                " range");
  }
}

}  // namespace

double clamp_interior(ActivationKind kind, double v) {
  if (kind == ActivationKind::bipolar) return std::clamp(v, -1.0 + kClampEpsilon, 1.0 - kClampEpsilon);
  return std::clamp(v, kClampEpsilon, 1.0 - kClampEpsilon);
}

double phi_potential(ActivationKind kind, InverseTemperature beta, double v) {
  require_interior(kind, v, "phi_potential");
  v = clamp_interior(kind, v);
  if (kind == ActivationKind::bipolar) {
    const double p = 0.5 * (1.0 + v);
    const double q = 0.5 * (1.0 - v);
    return (xlogx(p) + xlogx(q)) / beta.value();
  }
  return (xlogx(v) + xlogx(1.0 - v)) / beta.value();
}

double phi_derivative(ActivationKind kind, InverseTemperature beta, double v) {
  require_interior(kind, v, "phi_derivative");
  v = clamp_interior(kind, v);
  if (kind == ActivationKind::bipolar) return std::atanh(v) / beta.value();
  return std::log(v / (1.0 - v)) / beta.value();
}

Vector ActivationFunction::apply(const Vector& u) const {
  Vector v(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) v(i) = g(u(i));
  return v;
}

double ActivationFunction::clamp(double v) const {
  if (!std::isfinite(range_lo) && !std::isfinite(range_hi)) return v;
  return std::clamp(v, range_lo + kClampEpsilon, range_hi - kClampEpsilon);
}

ActivationFunction tanh_activation(double beta) {
  const InverseTemperature b(beta);
  ActivationFunction f;
  f.name = "tanh";
  f.gain = beta;
  f.g = [beta](double u) { return std::tanh(beta * u); };
  f.g_inverse = [beta](double v) { return std::atanh(v) / beta; };
  f.g_prime = [beta](double u) {
    const double t = std::tanh(beta * u);
    return beta * (1.0 - t * t);
  };
  f.potential = [b](double v) {
    return phi_potential(ActivationKind::bipolar, b, clamp_interior(ActivationKind::bipolar, v));
  };
  f.range_lo = -1.0;
  f.range_hi = 1.0;
  return f;
}

ActivationFunction logistic_activation(double beta) {
  const InverseTemperature b(beta);
  ActivationFunction f;
  f.name = "logistic";
  f.gain = beta;
  f.g = [beta](double u) { return 1.0 / (1.0 + std::exp(-beta * u)); };
  f.g_inverse = [beta](double v) { return std::log(v / (1.0 - v)) / beta; };
  f.g_prime = [beta](double u) {
    const double s = 1.0 / (1.0 + std::exp(-beta * u));
    return beta * s * (1.0 - s);
  };
  f.potential = [b](double v) {
    return phi_potential(ActivationKind::unipolar, b, clamp_interior(ActivationKind::unipolar, v));
  };
  f.range_lo = 0.0;
  f.range_hi = 1.0;
  return f;
}

ActivationFunction identity_activation() {
  ActivationFunction f;
  f.name = "identity";
  f.gain = 1.0;
  f.g = [](double u) { return u; };
  f.g_inverse = [](double v) { return v; };
  f.g_prime = [](double) { return 1.0; };
  f.potential = [](double v) { return 0.5 * v * v; };
  f.range_lo = -std::numeric_limits<double>::infinity();
  f.range_hi = std::numeric_limits<double>::infinity();
  return f;
}

ActivationFunction activation_by_name(const std::string& name, double gain) {
  if (name == "tanh") return tanh_activation(gain);
  if (name == "logistic") return logistic_activation(gain);
  if (name == "identity") return identity_activation();
  throw std::invalid_argument("unknown activation '" + name + "'");
}

ActivationFunction activation_for(ActivationKind kind, InverseTemperature beta) {
  return kind == ActivationKind::bipolar ? tanh_activation(beta.value())
                                         : logistic_activation(beta.value());
}

}  // namespace statnet

#pragma once

#include <functional>
#include <string>

#include "statnet/spin.hpp"

namespace statnet {

/// Bipolar units relax +-1 spins to (-1, 1); unipolar units relax {0, 1} to (0, 1).
enum class ActivationKind { bipolar, unipolar };

/// Activations are kept this far from the ends of their range before any
/// logarithm is taken.
inline constexpr double kClampEpsilon = 1e-12;

/// Per-unit entropy potential phi(v), i.e. -T times the entropy of the
/// unit's firing distribution.
///   bipolar:  (1/beta) [ (1+v)/2 log((1+v)/2) + (1-v)/2 log((1-v)/2) ]
///   unipolar: (1/beta) [ v log v + (1-v) log(1-v) ]
/// Throws std::invalid_argument when v is not strictly inside the range.
double phi_potential(ActivationKind kind, InverseTemperature beta, double v);

/// Derivative of phi_potential: atanh(v)/beta (bipolar), logit(v)/beta (unipolar).
double phi_derivative(ActivationKind kind, InverseTemperature beta, double v);

/// Clamp into [lo + eps, hi - eps] for the kind's range.
double clamp_interior(ActivationKind kind, double v);

/// A monotone elementwise transfer function v = g(u) bundled with its
/// inverse, derivative, and potential phi(v) = integral of g^-1, so that the
/// pair (g, phi) defines an energy E[v] whose minima are fixed points of
/// v = g(T v + h). `gain` is the beta folded into g.
struct ActivationFunction {
  std::string name;
  double gain = 1.0;
  std::function<double(double)> g;
  std::function<double(double)> g_inverse;
  std::function<double(double)> g_prime;
  std::function<double(double)> potential;
  double range_lo = -1.0;
  double range_hi = 1.0;

  double operator()(double u) const { return g(u); }
  Vector apply(const Vector& u) const;
  /// Clamp v into the open output range.
  double clamp(double v) const;
};

/// g(u) = tanh(beta u).
ActivationFunction tanh_activation(double beta = 1.0);
/// g(u) = 1 / (1 + exp(-beta u)).
ActivationFunction logistic_activation(double beta = 1.0);
/// g(u) = u, potential v^2/2.
ActivationFunction identity_activation();
/// Lookup by name: "tanh", "logistic", "identity".
ActivationFunction activation_by_name(const std::string& name, double gain = 1.0);

/// The activation that minimizes the mean-field energy for this unit kind.
ActivationFunction activation_for(ActivationKind kind, InverseTemperature beta);

}  // namespace statnet

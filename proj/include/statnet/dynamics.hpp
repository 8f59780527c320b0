#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "statnet/activation.hpp"
#include "statnet/spin.hpp"

namespace statnet {

/// Internal state u and output v = g(u) of an analog network.
struct NeuronState {
  Vector u;
  Vector v;

  /// Builds the state from u alone.
  static NeuronState from_internal(Vector u, const ActivationFunction& g);
  /// Builds the state from an output v inside g's range (u = g^-1(v)).
  static NeuronState from_output(const Vector& v, const ActivationFunction& g);
};

struct IntegratorConfig {
  double dt = 1e-3;
  Vector tau;                    // per-unit time constants
  std::size_t steps = 1000;
  std::size_t record_every = 1;

  /// Uniform time constant for n units.
  static IntegratorConfig uniform(std::size_t n, double dt, double tau, std::size_t steps,
                                  std::size_t record_every = 1);
  /// Throws std::invalid_argument on dt <= 0, tau <= 0 or dt/tau > 1.
  void validate(std::size_t n) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<NeuronState> states;
  std::vector<double> energies;
};

/// Thrown when a state stops being finite during integration.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// One forward-Euler step of tau_i du_i/dt + u_i = sum_j T_ij v_j + h_i:
///   u' = (1 - dt/tau) u + (dt/tau) (T v + h),  v' = g(u').
NeuronState euler_step(const NeuronState& state, const ConnectionMatrix& t, const FieldVector& h,
                       const ActivationFunction& g, const IntegratorConfig& cfg);

/// Lyapunov energy -1/2 sum_{i != j} T v v - sum h v + sum phi(v).
double lyapunov_energy(const ConnectionMatrix& t, const FieldVector& h,
                       const ActivationFunction& g, const Vector& v);

/// Runs cfg.steps Euler steps. The initial state, every record_every-th
/// state and the final state are recorded. Throws NumericalError if a
/// state goes non-finite.
Trajectory integrate(const NeuronState& state0, const ConnectionMatrix& t, const FieldVector& h,
                     const ActivationFunction& g, const IntegratorConfig& cfg);

}  // namespace statnet

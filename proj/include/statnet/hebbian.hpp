#pragma once

#include <cstddef>
#include <vector>

#include "statnet/spin.hpp"

namespace statnet {

enum class HebbMode { learning, recall };

/// Weights of the joint spin/weight energy
///   H[s, T] = -A sum_i h_i s_i - B sum_{i<j} T_ij s_i s_j + B sum_{i<j} T_ij^2 / (2c)
/// and the relaxation time of the weights.
struct HebbConfig {
  double a_weight = 1.0;
  double b_weight = 0.0;
  double c_scale = 1.0;
  double tau_t = 1.0;
  HebbMode mode = HebbMode::learning;

  static HebbConfig learning(double c, double tau_t);
  static HebbConfig recall(double c);
  /// Learning mode requires A > B, recall mode B > A.
  void validate() const;
};

struct PatternSet {
  std::vector<SpinConfig> patterns;
  std::vector<double> weights;  // empty means uniform

  std::size_t width() const { return patterns.empty() ? 0 : patterns.front().size(); }
  /// Presentation weights, filled in as uniform when none were given.
  std::vector<double> resolved_weights() const;
  void validate() const;
};

/// Learned couplings. Symmetric with zero diagonal after every update.
class MemoryMatrix {
 public:
  explicit MemoryMatrix(std::size_t n);
  explicit MemoryMatrix(const ConnectionMatrix& t);

  std::size_t size() const { return static_cast<std::size_t>(t_.rows()); }
  const Matrix& matrix() const { return t_; }
  ConnectionMatrix connection() const { return ConnectionMatrix(t_); }

 private:
  friend MemoryMatrix hebb_step(const MemoryMatrix&, const SpinConfig&, const HebbConfig&, double);
  Matrix t_;
};

/// Binarizes an input field by sign, with sign(0) = +1.
SpinConfig binarize(const FieldVector& h);

double combined_energy(const SpinConfig& s, const MemoryMatrix& t, const FieldVector& h,
                       const HebbConfig& cfg);

/// dH/dT_ij = -B s_i s_j + B T_ij / c for i != j, zero on the diagonal.
Matrix combined_energy_weight_gradient(const SpinConfig& s, const MemoryMatrix& t,
                                       const HebbConfig& cfg);

/// Euler step of tau_T dT/dt + T = c s s^T (off-diagonal only):
///   T <- (1 - dt/tau_T) T + (dt/tau_T) c s s^T.
/// Rejected in recall mode, where the learning rate is zero.
MemoryMatrix hebb_step(const MemoryMatrix& t, const SpinConfig& s, const HebbConfig& cfg, double dt);

/// Presents the patterns round-robin for `sweeps` passes starting from T = 0.
/// Pattern p advances by dt * P * w_p so that the long-run average is the
/// weighted population correlation c sum_p w_p s^p s^pT.
MemoryMatrix learn(const PatternSet& patterns, const HebbConfig& cfg, double dt, std::size_t sweeps);

struct RecallResult {
  SpinConfig state;
  bool converged = false;
  std::size_t sweeps = 0;
  /// Energy before the first update and after every accepted flip.
  std::vector<double> energy_trace;
};

/// -sum_{i<j} T_ij s_i s_j - h_weight sum_i probe_i s_i.
double recall_energy(const MemoryMatrix& t, const SpinConfig& s, const SpinConfig& probe,
                     double h_weight);

/// Asynchronous zero-temperature retrieval: visiting units in index order,
/// s_i <- sign(sum_j T_ij s_j + h_weight probe_i) with sign(0) = +1, until a
/// full sweep changes nothing or max_sweeps is reached. Starts from the probe.
RecallResult recall(const MemoryMatrix& t, const SpinConfig& probe, double h_weight,
                    std::size_t max_sweeps);

/// Fraction of positions where a and b agree.
double overlap_accuracy(const SpinConfig& a, const SpinConfig& b);

/// Copy of `s` with `flips` distinct positions negated, chosen by the rng.
SpinConfig corrupt(const SpinConfig& s, std::size_t flips, std::mt19937_64& rng);

/// Uniform random +-1 pattern.
SpinConfig random_pattern(std::size_t n, std::mt19937_64& rng);

}  // namespace statnet

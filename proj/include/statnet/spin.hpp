#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace statnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// External field (bias) per unit.
using FieldVector = Eigen::VectorXd;

/// Symmetric coupling matrix with zero diagonal. Entry (i, j) is the
/// interaction strength between units i and j; zero means "not connected".
class ConnectionMatrix {
 public:
  ConnectionMatrix() = default;
  /// Throws std::invalid_argument if `t` is not square, symmetric, finite,
  /// and zero on the diagonal.
  explicit ConnectionMatrix(Matrix t);

  static ConnectionMatrix zeros(std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(t_.rows()); }
  const Matrix& matrix() const { return t_; }
  double operator()(std::size_t i, std::size_t j) const {
    return t_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Matrix t_;
};

/// Discrete Ising state, every entry exactly -1 or +1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(Vector s);
  SpinConfig(std::initializer_list<int> s);

  /// Bit k of `index` set -> spin k is +1, clear -> -1.
  static SpinConfig from_index(std::uint64_t index, std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(s_.size()); }
  const Vector& values() const { return s_; }
  double operator[](std::size_t i) const { return s_(static_cast<Eigen::Index>(i)); }
  void flip(std::size_t i) { s_(static_cast<Eigen::Index>(i)) *= -1.0; }
  void set(std::size_t i, int sign);

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.s_.size() == b.s_.size() && a.s_ == b.s_;
  }

 private:
  Vector s_;
};

/// beta = 1/T with k_B = 1. Always positive and finite.
class InverseTemperature {
 public:
  explicit InverseTemperature(double beta);
  double value() const { return beta_; }
  double temperature() const { return 1.0 / beta_; }

 private:
  double beta_;
};

/// Exact thermodynamics of a small Ising system obtained by enumeration.
struct PartitionResult {
  double log_z = 0.0;
  double z = 0.0;            // exp(log_z); may be +inf when log_z is huge
  double f = 0.0;            // -log(Z)/beta
  double mean_energy = 0.0;  // <H>
  double entropy = 0.0;      // -<log p>
  Vector mean_spins;         // <s_i>
  Matrix pair_moments;       // <s_i s_j>, unit diagonal
  double beta = 0.0;
};

inline constexpr std::size_t kMaxEnumerationSpins = 24;

/// -1/2 sum_{i != j} T_ij s_i s_j - sum_i h_i s_i, summed over ordered pairs.
double ising_energy(const ConnectionMatrix& t, const FieldVector& h, const SpinConfig& s);

/// Z, F, S and the first two spin moments by summing over all 2^n states
/// in plain binary-counter order. Accumulation is shifted by the running
/// minimum energy so large beta does not overflow.
PartitionResult brute_force_partition(const ConnectionMatrix& t, const FieldVector& h,
                                      InverseTemperature beta);

/// Boltzmann probability of one state. The first overload enumerates.
double boltzmann_prob(const ConnectionMatrix& t, const FieldVector& h, InverseTemperature beta,
                      const SpinConfig& s);
double boltzmann_prob(const ConnectionMatrix& t, const FieldVector& h,
                      const PartitionResult& exact, const SpinConfig& s);

/// Random symmetric couplings, off-diagonal entries uniform in [-scale, scale].
ConnectionMatrix random_couplings(std::size_t n, double scale, std::mt19937_64& rng);
/// Entries uniform in [-scale, scale].
FieldVector random_field(std::size_t n, double scale, std::mt19937_64& rng);

/// Throws std::invalid_argument unless `h` has n finite entries.
void check_field(const FieldVector& h, std::size_t n);

}  // namespace statnet

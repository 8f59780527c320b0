#pragma once

#include <cstddef>

#include "statnet/activation.hpp"
#include "statnet/spin.hpp"

namespace statnet {

/// Relaxed mean-field state: v_i = <s_i> under the product trial distribution.
class Activation {
 public:
  /// Throws std::invalid_argument unless every entry is strictly interior.
  Activation(Vector v, ActivationKind kind);

  static Activation constant(std::size_t n, double value, ActivationKind kind = ActivationKind::bipolar);

  const Vector& values() const { return v_; }
  ActivationKind kind() const { return kind_; }
  std::size_t size() const { return static_cast<std::size_t>(v_.size()); }
  double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }

 private:
  Vector v_;
  ActivationKind kind_;
};

/// Fields u_i of the trial Hamiltonian H_0 = -sum_i u_i s_i.
struct MeanFieldParams {
  Vector u;
};

/// Soft Potts choices: row i is a probability distribution over A states.
class PottsActivation {
 public:
  explicit PottsActivation(Matrix v);
  const Matrix& values() const { return v_; }
  std::size_t units() const { return static_cast<std::size_t>(v_.rows()); }
  std::size_t states() const { return static_cast<std::size_t>(v_.cols()); }

 private:
  Matrix v_;
};

enum class UpdateOrder { synchronous, sequential };

struct FixedPointConfig {
  double tol = 1e-8;
  std::size_t max_sweeps = 10000;
  double damping = 0.0;  // new = (1 - damping) * update + damping * old
  UpdateOrder update_order = UpdateOrder::sequential;

  void validate() const;
};

struct FixedPointResult {
  Vector v;
  std::size_t sweeps = 0;
  double residual = 0.0;  // sup-norm of v - g(T v + h)
  bool converged = false;
};

struct MeanFieldResult {
  Activation activation;
  std::size_t sweeps = 0;
  double residual = 0.0;
  bool converged = false;
};

struct SoftassignResult {
  Matrix v;
  std::size_t sweeps = 0;
  double residual = 0.0;  // worst |row or column sum - 1|
  bool converged = false;
};

struct BoundCheck {
  double f_exact = 0.0;
  double e_mft = 0.0;
  double gap = 0.0;  // e_mft - f_exact, never below zero up to rounding
};

/// E_MFT[v] = -1/2 sum_{i != j} T_ij v_i v_j - sum_i h_i v_i + sum_i phi(v_i).
double mft_energy(const ConnectionMatrix& t, const FieldVector& h, InverseTemperature beta,
                  const Activation& v);

/// Same bound written in the trial fields u (v = tanh(beta u)):
/// -1/2 sum T v v - sum (h - u) v - (1/beta) sum log(2 cosh(beta u)).
double mft_energy_from_fields(const ConnectionMatrix& t, const FieldVector& h,
                              InverseTemperature beta, const MeanFieldParams& params);

/// Energy of the generalized network with an arbitrary activation:
/// -1/2 sum_{i != j} T v v - sum h v + sum g.potential(v_i).
double network_energy(const ConnectionMatrix& t, const FieldVector& h, const ActivationFunction& g,
                      const Vector& v);

/// sup-norm of v - g(T v + h).
double fixed_point_residual(const ConnectionMatrix& t, const FieldVector& h,
                            const ActivationFunction& g, const Vector& v);

/// Iterates v_i <- g(sum_j T_ij v_j + h_i) until the residual drops below
/// cfg.tol. When max_sweeps runs out the lowest-residual iterate is returned
/// with converged = false.
FixedPointResult fixed_point_iterate(const ConnectionMatrix& t, const FieldVector& h,
                                     const ActivationFunction& g, const Vector& v0,
                                     const FixedPointConfig& cfg);

/// Mean-field fixed point v = g(beta (T v + h)) with g = tanh or logistic by kind.
MeanFieldResult fixed_point_iterate(const ConnectionMatrix& t, const FieldVector& h,
                                    InverseTemperature beta, const Activation& v0,
                                    const FixedPointConfig& cfg);

/// v_a = exp(beta u_a) / sum_b exp(beta u_b), shifted by max(u).
Vector softmax_activation(const Vector& u, InverseTemperature beta);

/// Row-wise soft-max of a units x states matrix.
PottsActivation potts_softmax(const Matrix& u, InverseTemperature beta);

/// (1/beta) sum_{i,a} v_ia log v_ia.
double potts_potential(const PottsActivation& v, InverseTemperature beta);

/// Alternating row and column normalization of a strictly positive square
/// matrix until all row and column sums are within cfg.tol of one.
SoftassignResult softassign(const Matrix& m, const FixedPointConfig& cfg);

/// Log row and column scalings: v_ia = exp(log_m_ia + row_i + col_a).
struct SoftassignScaling {
  Vector row;
  Vector col;
};

/// The same iteration carried out on log(m). Useful when m = exp(beta u)
/// for large beta would under- or overflow. If `scaling` holds column
/// scalings of matching size the iteration resumes from them, and the final
/// scalings are written back.
SoftassignResult softassign_log(const Matrix& log_m, const FixedPointConfig& cfg,
                                SoftassignScaling* scaling = nullptr);

/// Compares E_MFT at a bipolar activation with the exact free energy.
BoundCheck verify_bound(const ConnectionMatrix& t, const FieldVector& h, InverseTemperature beta,
                        const Activation& v);
BoundCheck verify_bound(const ConnectionMatrix& t, const FieldVector& h,
                        const PartitionResult& exact, const Activation& v);

}  // namespace statnet

#include "statnet/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace statnet {

namespace {

void check_dims(const ConnectionMatrix& t, const FieldVector& h, std::size_t n, const char* who) {
  check_field(h, t.size());
  if (n != t.size()) {
    throw std::invalid_argument(std::string(who) + ": activation has length " + std::to_string(n) +
                                ", expected " + std::to_string(t.size()));
  }
}

double pair_term(const Matrix& t, const Vector& v) {
  // Diagonal is zero, so the i != j restriction is implicit.
  return -0.5 * v.dot(t * v);
}

double log_2cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

double log_sum_exp(const Eigen::Ref<const Vector>& x) {
  const double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

}  // namespace

Activation::Activation(Vector v, ActivationKind kind) : v_(std::move(v)), kind_(kind) {
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    const double x = v_(i);
    const bool ok = kind_ == ActivationKind::bipolar ? (x > -1.0 && x < 1.0) : (x > 0.0 && x < 1.0);
    if (!ok) {
      throw std::invalid_argument("Activation: entry " + std::to_string(i) + " = " +
                                  std::to_string(x) + " is outside the open range");
    }
  }
}

Activation Activation::constant(std::size_t n, double value, ActivationKind kind) {
  return Activation(Vector::Constant(static_cast<Eigen::Index>(n), value), kind);
}

PottsActivation::PottsActivation(Matrix v) : v_(std::move(v)) {
  for (Eigen::Index i = 0; i < v_.rows(); ++i) {
    if ((v_.row(i).array() < 0.0).any() || !v_.row(i).allFinite()) {
      throw std::invalid_argument("PottsActivation: row " + std::to_string(i) +
                                  " has a negative or non-finite entry");
    }
    if (std::abs(v_.row(i).sum() - 1.0) > 1e-10) {
      throw std::invalid_argument("PottsActivation: row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

void FixedPointConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("FixedPointConfig: tol must be positive");
  if (max_sweeps < 1) throw std::invalid_argument("FixedPointConfig: max_sweeps must be >= 1");
  if (!(damping >= 0.0 && damping < 1.0)) {
    throw std::invalid_argument("FixedPointConfig: damping must lie in [0, 1)");
  }
}

double mft_energy(const ConnectionMatrix& t, const FieldVector& h, InverseTemperature beta,
                  const Activation& v) {
  check_dims(t, h, v.size(), "mft_energy");
  double entropy_term = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) entropy_term += phi_potential(v.kind(), beta, v[i]);
  return pair_term(t.matrix(), v.values()) - h.dot(v.values()) + entropy_term;
}

double mft_energy_from_fields(const ConnectionMatrix& t, const FieldVector& h,
                              InverseTemperature beta, const MeanFieldParams& params) {
  check_dims(t, h, static_cast<std::size_t>(params.u.size()), "mft_energy_from_fields");
  const double b = beta.value();
  const Vector v = (b * params.u).array().tanh().matrix();
  double free_term = 0.0;
  for (Eigen::Index i = 0; i < params.u.size(); ++i) free_term += log_2cosh(b * params.u(i));
  return pair_term(t.matrix(), v) - (h - params.u).dot(v) - free_term / b;
}

double network_energy(const ConnectionMatrix& t, const FieldVector& h, const ActivationFunction& g,
                      const Vector& v) {
  check_dims(t, h, static_cast<std::size_t>(v.size()), "network_energy");
  double potential = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) potential += g.potential(v(i));
  return pair_term(t.matrix(), v) - h.dot(v) + potential;
}

double fixed_point_residual(const ConnectionMatrix& t, const FieldVector& h,
                            const ActivationFunction& g, const Vector& v) {
  const Vector target = g.apply(t.matrix() * v + h);
  return (v - target).lpNorm<Eigen::Infinity>();
}

FixedPointResult fixed_point_iterate(const ConnectionMatrix& t, const FieldVector& h,
                                     const ActivationFunction& g, const Vector& v0,
                                     const FixedPointConfig& cfg) {
  cfg.validate();
  check_dims(t, h, static_cast<std::size_t>(v0.size()), "fixed_point_iterate");
  const Matrix& tm = t.matrix();
  const Eigen::Index n = v0.size();
  const double keep = cfg.damping;

  Vector v = v0;
  FixedPointResult best{v, 0, fixed_point_residual(t, h, g, v), false};

  for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    if (cfg.update_order == UpdateOrder::synchronous) {
      const Vector target = g.apply(tm * v + h);
      for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = g.clamp((1.0 - keep) * target(i) + keep * v(i));
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double target = g(tm.row(i).dot(v) + h(i));
        v(i) = g.clamp((1.0 - keep) * target + keep * v(i));
      }
    }
    if (!v.allFinite()) break;
    const double residual = fixed_point_residual(t, h, g, v);
    if (residual < best.residual) {
      best.v = v;
      best.residual = residual;
    }
    best.sweeps = sweep;
    if (residual <= cfg.tol) {
      best.v = v;
      best.residual = residual;
      best.converged = true;
      return best;
    }
  }
  return best;
}

MeanFieldResult fixed_point_iterate(const ConnectionMatrix& t, const FieldVector& h,
                                    InverseTemperature beta, const Activation& v0,
                                    const FixedPointConfig& cfg) {
  const ActivationFunction g = activation_for(v0.kind(), beta);
  FixedPointResult r = fixed_point_iterate(t, h, g, v0.values(), cfg);
  return MeanFieldResult{Activation(std::move(r.v), v0.kind()), r.sweeps, r.residual, r.converged};
}

Vector softmax_activation(const Vector& u, InverseTemperature beta) {
  if (u.size() == 0) throw std::invalid_argument("softmax_activation: empty input");
  if (!u.allFinite()) throw std::invalid_argument("softmax_activation: non-finite input");
  const double m = u.maxCoeff();
  Vector e = (beta.value() * (u.array() - m)).exp().matrix();
  return e / e.sum();
}

PottsActivation potts_softmax(const Matrix& u, InverseTemperature beta) {
  Matrix v(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    v.row(i) = softmax_activation(u.row(i).transpose(), beta).transpose();
  }
  return PottsActivation(std::move(v));
}

double potts_potential(const PottsActivation& v, InverseTemperature beta) {
  double acc = 0.0;
  const Matrix& m = v.values();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index a = 0; a < m.cols(); ++a) {
      if (m(i, a) > 0.0) acc += m(i, a) * std::log(m(i, a));
    }
  }
  return acc / beta.value();
}

SoftassignResult softassign_log(const Matrix& log_m, const FixedPointConfig& cfg,
                                SoftassignScaling* scaling) {
  cfg.validate();
  if (log_m.rows() != log_m.cols() || log_m.rows() == 0) {
    throw std::invalid_argument("softassign: matrix must be square and nonempty");
  }
  if (!log_m.allFinite()) {
    throw std::invalid_argument("softassign: entries must be strictly positive and finite");
  }
  const Eigen::Index n = log_m.rows();
  Vector row = Vector::Zero(n);
  Vector col = Vector::Zero(n);
  if (scaling != nullptr && scaling->col.size() == n && scaling->col.allFinite()) col = scaling->col;

  SoftassignResult r;
  r.residual = std::numeric_limits<double>::infinity();
  Matrix work(n, n);
  for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    // Row normalization of log_m + col, then column normalization.
    work = log_m.rowwise() + col.transpose();
    for (Eigen::Index i = 0; i < n; ++i) row(i) = -log_sum_exp(work.row(i).transpose());
    work = log_m.colwise() + row;
    for (Eigen::Index a = 0; a < n; ++a) col(a) = -log_sum_exp(work.col(a));

    r.v = ((log_m.colwise() + row).rowwise() + col.transpose()).array().exp().matrix();
    const double row_err = (r.v.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col_err = (r.v.colwise().sum().array() - 1.0).abs().maxCoeff();
    r.residual = std::max(row_err, col_err);
    r.sweeps = sweep;
    if (r.residual <= cfg.tol) {
      r.converged = true;
      break;
    }
  }
  if (scaling != nullptr) {
    scaling->row = row;
    scaling->col = col;
  }
  return r;
}

SoftassignResult softassign(const Matrix& m, const FixedPointConfig& cfg) {
  if (!((m.array() > 0.0).all()) || !m.allFinite()) {
    throw std::invalid_argument("softassign: entries must be strictly positive and finite");
  }
  return softassign_log(m.array().log().matrix(), cfg);
}

BoundCheck verify_bound(const ConnectionMatrix& t, const FieldVector& h,
                        const PartitionResult& exact, const Activation& v) {
  if (v.kind() != ActivationKind::bipolar) {
    throw std::invalid_argument("verify_bound: the Ising bound needs a bipolar activation");
  }
  BoundCheck c;
  c.f_exact = exact.f;
  c.e_mft = mft_energy(t, h, InverseTemperature(exact.beta), v);
  c.gap = c.e_mft - c.f_exact;
  return c;
}

BoundCheck verify_bound(const ConnectionMatrix& t, const FieldVector& h, InverseTemperature beta,
                        const Activation& v) {
  return verify_bound(t, h, brute_force_partition(t, h, beta), v);
}

}  // namespace statnet

#include "statnet/spin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace statnet {

ConnectionMatrix::ConnectionMatrix(Matrix t) : t_(std::move(t)) {
  if (t_.rows() != t_.cols()) {
    throw std::invalid_argument("ConnectionMatrix: matrix must be square, got " +
                                std::to_string(t_.rows()) + "x" + std::to_string(t_.cols()));
  }
  if (t_.rows() == 0) throw std::invalid_argument("ConnectionMatrix: empty matrix");
  for (Eigen::Index i = 0; i < t_.rows(); ++i) {
    if (t_(i, i) != 0.0) {
      throw std::invalid_argument("ConnectionMatrix: nonzero diagonal at " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < t_.cols(); ++j) {
      if (!std::isfinite(t_(i, j))) {
        throw std::invalid_argument("ConnectionMatrix: non-finite entry");
      }
      if (t_(i, j) != t_(j, i)) {
        throw std::invalid_argument("ConnectionMatrix: not symmetric at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
      }
    }
  }
}

ConnectionMatrix ConnectionMatrix::zeros(std::size_t n) {
  return ConnectionMatrix(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

SpinConfig::SpinConfig(Vector s) : s_(std::move(s)) {
  for (Eigen::Index i = 0; i < s_.size(); ++i) {
    if (s_(i) != 1.0 && s_(i) != -1.0) {
      throw std::invalid_argument("SpinConfig: entry " + std::to_string(i) + " is not +-1");
    }
  }
}

SpinConfig::SpinConfig(std::initializer_list<int> s) : s_(static_cast<Eigen::Index>(s.size())) {
  Eigen::Index i = 0;
  for (int v : s) {
    if (v != 1 && v != -1) throw std::invalid_argument("SpinConfig: entry is not +-1");
    s_(i++) = v;
  }
}

SpinConfig SpinConfig::from_index(std::uint64_t index, std::size_t n) {
  Vector s(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    s(static_cast<Eigen::Index>(k)) = ((index >> k) & 1U) ? 1.0 : -1.0;
  }
  SpinConfig out;
  out.s_ = std::move(s);
  return out;
}

void SpinConfig::set(std::size_t i, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("SpinConfig::set: sign must be +-1");
  s_(static_cast<Eigen::Index>(i)) = sign;
}

InverseTemperature::InverseTemperature(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("InverseTemperature: beta must be positive and finite, got " +
                                std::to_string(beta));
  }
}

void check_field(const FieldVector& h, std::size_t n) {
  if (static_cast<std::size_t>(h.size()) != n) {
    throw std::invalid_argument("field has length " + std::to_string(h.size()) + ", expected " +
                                std::to_string(n));
  }
  if (!h.allFinite()) throw std::invalid_argument("field has non-finite entries");
}

double ising_energy(const ConnectionMatrix& t, const FieldVector& h, const SpinConfig& s) {
  const std::size_t n = t.size();
  check_field(h, n);
  if (s.size() != n) {
    throw std::invalid_argument("ising_energy: spin config has length " + std::to_string(s.size()) +
                                ", expected " + std::to_string(n));
  }
  double pair = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pair += t(i, j) * s[i] * s[j];
    }
  }
  double field = 0.0;
  for (std::size_t i = 0; i < n; ++i) field += h(static_cast<Eigen::Index>(i)) * s[i];
  return -0.5 * pair - field;
}

PartitionResult brute_force_partition(const ConnectionMatrix& t, const FieldVector& h,
                                      InverseTemperature beta) {
  const std::size_t n = t.size();
  check_field(h, n);
  if (n > kMaxEnumerationSpins) {
    throw std::invalid_argument("brute_force_partition: n = " + std::to_string(n) +
                                " exceeds the enumeration limit of " +
                                std::to_string(kMaxEnumerationSpins));
  }
  const double b = beta.value();
  const Matrix& tm = t.matrix();
  const auto dim = static_cast<Eigen::Index>(n);

  // States k and ~k are visited together so that with h = 0 the first
  // moments cancel exactly.
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  double shift = 0.0;  // running minimum energy
  bool first = true;
  double z_acc = 0.0;
  double e_acc = 0.0;
  Vector s1 = Vector::Zero(dim);
  Matrix s2 = Matrix::Zero(dim, dim);
  Vector s(dim);

  for (std::uint64_t k = 0; k < half; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      s(static_cast<Eigen::Index>(i)) = ((k >> i) & 1U) ? 1.0 : -1.0;
    }
    const double quad = 0.5 * s.dot(tm * s);
    const double lin = h.dot(s);
    const double e_a = -quad - lin;  // state s
    const double e_b = -quad + lin;  // state -s
    const double lowest = std::min(e_a, e_b);
    if (first) {
      shift = lowest;
      first = false;
    } else if (lowest < shift) {
      const double factor = std::exp(-b * (shift - lowest));
      z_acc *= factor;
      e_acc *= factor;
      s1 *= factor;
      s2 *= factor;
      shift = lowest;
    }
    const double w_a = std::exp(-b * (e_a - shift));
    const double w_b = std::exp(-b * (e_b - shift));
    z_acc += w_a + w_b;
    e_acc += w_a * e_a + w_b * e_b;
    s1.noalias() += (w_a - w_b) * s;
    s2.noalias() += (w_a + w_b) * (s * s.transpose());
  }

  PartitionResult r;
  r.beta = b;
  r.log_z = std::log(z_acc) - b * shift;
  r.z = std::exp(r.log_z);
  r.f = -r.log_z / b;
  r.mean_energy = e_acc / z_acc;
  // log p = -beta H - log Z, so -<log p> = beta <H> + log Z.
  r.entropy = b * r.mean_energy + r.log_z;
  r.mean_spins = s1 / z_acc;
  r.pair_moments = s2 / z_acc;
  return r;
}

double boltzmann_prob(const ConnectionMatrix& t, const FieldVector& h,
                      const PartitionResult& exact, const SpinConfig& s) {
  return std::exp(-exact.beta * ising_energy(t, h, s) - exact.log_z);
}

double boltzmann_prob(const ConnectionMatrix& t, const FieldVector& h, InverseTemperature beta,
                      const SpinConfig& s) {
  return boltzmann_prob(t, h, brute_force_partition(t, h, beta), s);
}

ConnectionMatrix random_couplings(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix t = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      t(i, j) = dist(rng);
      t(j, i) = t(i, j);
    }
  }
  return ConnectionMatrix(std::move(t));
}

FieldVector random_field(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  FieldVector h(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = dist(rng);
  return h;
}

}  // namespace statnet

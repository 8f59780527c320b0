#include "statnet/hebbian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace statnet {

HebbConfig HebbConfig::learning(double c, double tau_t) {
  return HebbConfig{1.0, 0.0, c, tau_t, HebbMode::learning};
}

HebbConfig HebbConfig::recall(double c) { return HebbConfig{0.0, 1.0, c, 1.0, HebbMode::recall}; }

void HebbConfig::validate() const {
  if (!(a_weight >= 0.0) || !(b_weight >= 0.0)) {
    throw std::invalid_argument("HebbConfig: A and B must be nonnegative");
  }
  if (!(c_scale >= 0.0) || !std::isfinite(c_scale)) {
    throw std::invalid_argument("HebbConfig: c must be nonnegative and finite");
  }
  if (!(tau_t > 0.0)) throw std::invalid_argument("HebbConfig: tau_T must be positive");
  if (mode == HebbMode::learning && !(a_weight > b_weight)) {
    throw std::invalid_argument("HebbConfig: learning mode needs A > B");
  }
  if (mode == HebbMode::recall && !(b_weight > a_weight)) {
    throw std::invalid_argument("HebbConfig: recall mode needs B > A");
  }
}

std::vector<double> PatternSet::resolved_weights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(patterns.size(), 1.0 / static_cast<double>(patterns.size()));
}

void PatternSet::validate() const {
  if (patterns.empty()) throw std::invalid_argument("PatternSet: no patterns");
  const std::size_t n = patterns.front().size();
  if (n == 0) throw std::invalid_argument("PatternSet: empty pattern");
  for (const auto& p : patterns) {
    if (p.size() != n) throw std::invalid_argument("PatternSet: patterns differ in length");
  }
  if (!weights.empty()) {
    if (weights.size() != patterns.size()) {
      throw std::invalid_argument("PatternSet: one weight per pattern required");
    }
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("PatternSet: negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("PatternSet: weights must sum to 1");
  }
}

MemoryMatrix::MemoryMatrix(std::size_t n)
    : t_(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}

MemoryMatrix::MemoryMatrix(const ConnectionMatrix& t) : t_(t.matrix()) {}

SpinConfig binarize(const FieldVector& h) {
  Vector s(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) s(i) = h(i) >= 0.0 ? 1.0 : -1.0;
  return SpinConfig(std::move(s));
}

double combined_energy(const SpinConfig& s, const MemoryMatrix& t, const FieldVector& h,
                       const HebbConfig& cfg) {
  const std::size_t n = t.size();
  check_field(h, n);
  if (s.size() != n) throw std::invalid_argument("combined_energy: spin config length mismatch");
  if (!(cfg.c_scale > 0.0)) throw std::invalid_argument("combined_energy: c must be positive");
  const Matrix& m = t.matrix();
  double field = 0.0;
  for (std::size_t i = 0; i < n; ++i) field += h(static_cast<Eigen::Index>(i)) * s[i];
  double pair = 0.0;
  double potential = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double tij = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      pair += tij * s[i] * s[j];
      potential += tij * tij / (2.0 * cfg.c_scale);
    }
  }
  return -cfg.a_weight * field - cfg.b_weight * pair + cfg.b_weight * potential;
}

Matrix combined_energy_weight_gradient(const SpinConfig& s, const MemoryMatrix& t,
                                       const HebbConfig& cfg) {
  const Matrix& m = t.matrix();
  if (s.size() != t.size()) throw std::invalid_argument("combined_energy_weight_gradient: length mismatch");
  Matrix g = cfg.b_weight * (m / cfg.c_scale - s.values() * s.values().transpose());
  g.diagonal().setZero();
  return g;
}

MemoryMatrix hebb_step(const MemoryMatrix& t, const SpinConfig& s, const HebbConfig& cfg, double dt) {
  cfg.validate();
  if (cfg.mode != HebbMode::learning) {
    throw std::logic_error("hebb_step: weights are frozen in recall mode");
  }
  if (!(dt >= 0.0) || dt / cfg.tau_t > 1.0) {
    throw std::invalid_argument("hebb_step: need 0 <= dt/tau_T <= 1");
  }
  if (s.size() != t.size()) throw std::invalid_argument("hebb_step: pattern length mismatch");
  const double r = dt / cfg.tau_t;
  MemoryMatrix out = t;
  if (r == 0.0) return out;
  const Vector& x = s.values();
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double updated = (1.0 - r) * t.t_(i, j) + r * cfg.c_scale * x(i) * x(j);
      out.t_(i, j) = updated;
      out.t_(j, i) = updated;
    }
    out.t_(i, i) = 0.0;
  }
  return out;
}

MemoryMatrix learn(const PatternSet& patterns, const HebbConfig& cfg, double dt, std::size_t sweeps) {
  patterns.validate();
  cfg.validate();
  const std::vector<double> w = patterns.resolved_weights();
  const auto count = static_cast<double>(patterns.patterns.size());
  MemoryMatrix t(patterns.width());
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t p = 0; p < patterns.patterns.size(); ++p) {
      t = hebb_step(t, patterns.patterns[p], cfg, dt * count * w[p]);
    }
  }
  return t;
}

double recall_energy(const MemoryMatrix& t, const SpinConfig& s, const SpinConfig& probe,
                     double h_weight) {
  const Matrix& m = t.matrix();
  const Eigen::Index n = m.rows();
  double pair = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      pair += m(i, j) * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
    }
  }
  double field = 0.0;
  if (h_weight != 0.0) field = h_weight * probe.values().dot(s.values());
  return -pair - field;
}

RecallResult recall(const MemoryMatrix& t, const SpinConfig& probe, double h_weight,
                    std::size_t max_sweeps) {
  if (probe.size() != t.size()) throw std::invalid_argument("recall: probe length mismatch");
  if (!(h_weight >= 0.0)) throw std::invalid_argument("recall: h_weight must be nonnegative");
  const Matrix& m = t.matrix();
  const auto n = static_cast<Eigen::Index>(t.size());

  RecallResult r{probe, false, 0, {}};
  double energy = recall_energy(t, r.state, probe, h_weight);
  r.energy_trace.push_back(energy);
  Vector s = probe.values();

  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double local = m.row(i).dot(s) + h_weight * probe.values()(i);
      const double next = local >= 0.0 ? 1.0 : -1.0;
      if (next != s(i)) {
        // Energy change of flipping s_i, where `local` excludes T_ii = 0.
        energy += (s(i) - next) * local;
        s(i) = next;
        changed = true;
        r.energy_trace.push_back(energy);
      }
    }
    r.sweeps = sweep;
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  r.state = SpinConfig(std::move(s));
  return r;
}

double overlap_accuracy(const SpinConfig& a, const SpinConfig& b) {
  if (a.size() != b.size() || a.size() == 0) throw std::invalid_argument("overlap_accuracy: length mismatch");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

SpinConfig corrupt(const SpinConfig& s, std::size_t flips, std::mt19937_64& rng) {
  if (flips > s.size()) throw std::invalid_argument("corrupt: more flips than bits");
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `flips` entries are a uniform sample.
  for (std::size_t k = 0; k < flips; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, idx.size() - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  SpinConfig out = s;
  for (std::size_t k = 0; k < flips; ++k) out.flip(idx[k]);
  return out;
}

SpinConfig random_pattern(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Vector s(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = coin(rng) ? 1.0 : -1.0;
  return SpinConfig(std::move(s));
}

}  // namespace statnet

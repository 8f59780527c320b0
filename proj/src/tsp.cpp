#include "statnet/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace statnet {

namespace {

constexpr std::size_t kMinCities = 3;
constexpr std::size_t kMaxCities = 12;

// dE/dV for E = sum_{i,j} d_ij sum_a V_ia V_j,a+1 with cyclic positions.
Matrix tour_energy_gradient(const Matrix& d, const Matrix& v) {
  const Eigen::Index n = v.cols();
  Matrix next(v.rows(), n);
  Matrix prev(v.rows(), n);
  for (Eigen::Index a = 0; a < n; ++a) {
    next.col(a) = v.col((a + 1) % n);
    prev.col(a) = v.col((a + n - 1) % n);
  }
  return d * (next + prev);
}

double assignment_entropy(const Matrix& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v.data()[i];
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

}  // namespace

TspInstance::TspInstance(std::vector<std::pair<double, double>> coords) : coords_(std::move(coords)) {
  const auto n = static_cast<Eigen::Index>(coords_.size());
  distance_ = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [xi, yi] = coords_[static_cast<std::size_t>(i)];
    if (!std::isfinite(xi) || !std::isfinite(yi)) {
      throw std::invalid_argument("TspInstance: non-finite coordinate for city " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      const auto [xj, yj] = coords_[static_cast<std::size_t>(j)];
      distance_(i, j) = distance_(j, i) = std::hypot(xi - xj, yi - yj);
    }
  }
}

TspInstance TspInstance::random(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> c(n);
  for (auto& p : c) {
    p.first = unit(rng);
    p.second = unit(rng);
  }
  return TspInstance(std::move(c));
}

std::vector<double> AnnealSchedule::betas() const {
  std::vector<double> b(stages);
  double beta = beta0;
  for (auto& x : b) {
    x = beta;
    beta *= rate;
  }
  return b;
}

void AnnealSchedule::validate() const {
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw std::invalid_argument("anneal: beta0 must be positive");
  if (!(rate > 1.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("anneal: rate must exceed 1 so betas strictly increase");
  }
  if (stages < 1) throw std::invalid_argument("anneal: stages must be >= 1");
}

double tour_length(const TspInstance& inst, const std::vector<std::size_t>& tour) {
  const Matrix& d = inst.distance();
  double len = 0.0;
  for (std::size_t a = 0; a < tour.size(); ++a) {
    len += d(static_cast<Eigen::Index>(tour[a]), static_cast<Eigen::Index>(tour[(a + 1) % tour.size()]));
  }
  return len;
}

std::vector<std::size_t> extract_tour(const Matrix& assignment, bool* fallback) {
  const auto n = static_cast<std::size_t>(assignment.rows());
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> tour(n, kFree);
  bool ok = true;
  for (std::size_t i = 0; i < n && ok; ++i) {
    Eigen::Index best = 0;
    assignment.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
    auto& slot = tour[static_cast<std::size_t>(best)];
    if (slot != kFree) ok = false;
    slot = i;
  }
  if (fallback != nullptr) *fallback = !ok;
  if (ok) return tour;

  struct Cell {
    double w;
    std::size_t city;
    std::size_t pos;
  };
  std::vector<Cell> cells;
  cells.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      cells.push_back({assignment(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)), i, a});
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.w > y.w; });
  std::fill(tour.begin(), tour.end(), kFree);
  std::vector<bool> city_used(n, false);
  for (const Cell& c : cells) {
    if (tour[c.pos] == kFree && !city_used[c.city]) {
      tour[c.pos] = c.city;
      city_used[c.city] = true;
    }
  }
  return tour;
}

TspResult solve_tsp(const TspInstance& inst, const TspOptions& opts) {
  const std::size_t n = inst.size();
  if (n < kMinCities || n > kMaxCities) {
    throw std::invalid_argument("solve_tsp: need between 3 and 12 cities, got " + std::to_string(n));
  }
  opts.schedule.validate();
  opts.softassign.validate();
  if (opts.inner_iterations < 1) throw std::invalid_argument("solve_tsp: inner_iterations must be >= 1");

  // Work with distances of unit mean so one schedule fits every instance scale.
  const auto dim = static_cast<Eigen::Index>(n);
  const double mean_d = inst.distance().sum() / static_cast<double>(n * (n - 1));
  const Matrix d = mean_d > 0.0 ? Matrix(inst.distance() / mean_d) : inst.distance();

  // City 0 is pinned to position 0, which removes the cyclic-shift symmetry
  // of the tour energy. Only the remaining (n-1)x(n-1) block is relaxed.
  const Eigen::Index m = dim - 1;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  Matrix v = Matrix::Zero(dim, dim);
  v(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < dim; ++i) {
    for (Eigen::Index a = 1; a < dim; ++a) {
      v(i, a) = (1.0 + opts.noise * jitter(rng)) / static_cast<double>(m);
    }
  }

  TspResult result;
  SoftassignScaling scaling;
  for (double beta : opts.schedule.betas()) {
    SoftassignResult sa;
    for (std::size_t it = 0; it < opts.inner_iterations; ++it) {
      const Matrix u = -tour_energy_gradient(d, v) + opts.self_amplification * v;
      sa = softassign_log(beta * u.bottomRightCorner(m, m), opts.softassign, &scaling);
      const double change = (sa.v - v.bottomRightCorner(m, m)).lpNorm<Eigen::Infinity>();
      v.bottomRightCorner(m, m) = sa.v;
      if (change < opts.inner_tol) break;
    }

    TspStage stage;
    stage.beta = beta;
    stage.entropy = assignment_entropy(v);
    stage.tour_length = tour_length(inst, extract_tour(v));
    stage.constraint_error = sa.residual;
    result.converged = result.converged && sa.converged;
    result.stages.push_back(stage);

    if ((v.rowwise().maxCoeff().array() > 1.0 - opts.saturation).all()) break;
  }

  result.final_assignment = v;
  result.tour = extract_tour(v, &result.used_greedy_fallback);
  result.tour_length = tour_length(inst, result.tour);
  return result;
}

}  // namespace statnet

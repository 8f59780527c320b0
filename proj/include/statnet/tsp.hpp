#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "statnet/meanfield.hpp"

namespace statnet {

/// Cities in the plane with their Euclidean distance matrix.
class TspInstance {
 public:
  explicit TspInstance(std::vector<std::pair<double, double>> coords);

  static TspInstance random(std::size_t n, std::uint64_t seed);

  std::size_t size() const { return coords_.size(); }
  const std::vector<std::pair<double, double>>& coords() const { return coords_; }
  const Matrix& distance() const { return distance_; }

 private:
  std::vector<std::pair<double, double>> coords_;
  Matrix distance_;
};

/// beta_k = beta0 * rate^k for k = 0 .. stages-1.
struct AnnealSchedule {
  double beta0 = 1.0;
  double rate = 1.05;
  std::size_t stages = 200;

  std::vector<double> betas() const;
  void validate() const;
};

struct TspOptions {
  AnnealSchedule schedule;
  /// Soft-assign settings used at every relaxation step.
  FixedPointConfig softassign{1e-5, 20000, 0.0, UpdateOrder::sequential};
  /// Relaxation steps per temperature and their stopping threshold.
  std::size_t inner_iterations = 20;
  double inner_tol = 1e-6;
  /// Self-amplification added to the assignment energy, -gamma/2 sum V^2.
  double self_amplification = 2.0;
  /// Amplitude of the seeded perturbation of the uniform starting assignment.
  double noise = 1e-3;
  std::uint64_t seed = 0;
  /// Stop annealing once every row maximum exceeds 1 - saturation.
  double saturation = 1e-6;
};

struct TspStage {
  double beta = 0.0;
  double entropy = 0.0;  // -sum V log V
  double tour_length = 0.0;
  double constraint_error = 0.0;  // worst |row or column sum - 1|
};

struct TspResult {
  std::vector<std::size_t> tour;  // tour[a] = city visited at position a
  double tour_length = 0.0;
  Matrix final_assignment;        // cities x positions
  bool used_greedy_fallback = false;
  bool converged = true;          // every soft-assign call converged
  std::vector<TspStage> stages;
};

/// Closed-tour length visiting cities in the given order.
double tour_length(const TspInstance& inst, const std::vector<std::size_t>& tour);

/// Tour from an assignment matrix by row argmax (ties to the lowest
/// position). If two cities claim the same position, all cells are taken in
/// descending weight order instead and `fallback` is set.
std::vector<std::size_t> extract_tour(const Matrix& assignment, bool* fallback = nullptr);

/// Deterministic annealing over doubly stochastic city-to-position
/// assignments. At each beta the assignment is relaxed by repeatedly
/// computing the negative gradient of the tour energy and projecting
/// exp(beta u) back onto the assignment polytope with soft-assign.
TspResult solve_tsp(const TspInstance& inst, const TspOptions& opts);

}  // namespace statnet

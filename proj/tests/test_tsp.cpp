#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "statnet/tsp.hpp"

using namespace statnet;

TEST(TspInstance, DistancesAreMetric) {
  const auto inst = TspInstance::random(9, 4);
  const Matrix& d = inst.distance();
  for (Eigen::Index i = 0; i < 9; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (Eigen::Index j = 0; j < 9; ++j) {
      EXPECT_EQ(d(i, j), d(j, i));
      for (Eigen::Index k = 0; k < 9; ++k) EXPECT_LE(d(i, k), d(i, j) + d(j, k) + 1e-15);
    }
  }
}

TEST(TspInstance, RejectsNonFinite) {
  EXPECT_THROW(TspInstance({{0.0, 0.0}, {NAN, 1.0}, {1.0, 1.0}}), std::invalid_argument);
}

TEST(Tsp, RejectsOutOfRangeSizes) {
  EXPECT_THROW(solve_tsp(TspInstance({{0, 0}, {1, 1}}), {}), std::invalid_argument);
  EXPECT_THROW(solve_tsp(TspInstance::random(13, 1), {}), std::invalid_argument);
}

TEST(Tsp, ScheduleValidation) {
  AnnealSchedule s;
  s.rate = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = {};
  s.beta0 = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  const auto b = AnnealSchedule{}.betas();
  ASSERT_EQ(b.size(), 200U);
  for (std::size_t k = 1; k < b.size(); ++k) EXPECT_GT(b[k], b[k - 1]);
}

TEST(Tsp, TriangleGivesPerimeter) {
  const TspInstance inst({{0.0, 0.0}, {3.0, 0.0}, {0.0, 4.0}});
  const auto r = solve_tsp(inst, {});
  EXPECT_NEAR(r.tour_length, 12.0, 1e-12);
}

TEST(Tsp, UnitSquareGivesPerimeter) {
  const TspInstance inst({{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}});
  const auto r = solve_tsp(inst, {});
  EXPECT_NEAR(r.tour_length, 4.0, 1e-12);
  EXPECT_FALSE(r.used_greedy_fallback);
}

TEST(Tsp, EightCitiesWithinBoundOfExactOptimum) {
  const auto inst = TspInstance::random(8, 1000);
  const auto r = solve_tsp(inst, {});
  const double best = oracle::optimal_tour_length(inst.distance());
  EXPECT_LE(r.tour_length, 1.2 * best);
  EXPECT_GE(r.tour_length, best - 1e-12);
  EXPECT_NEAR(r.tour_length, tour_length(inst, r.tour), 1e-15);
}

TEST(Tsp, StagesSatisfyConstraintsAndHarden) {
  const auto inst = TspInstance::random(8, 1003);
  TspOptions opts;
  const auto r = solve_tsp(inst, opts);
  EXPECT_TRUE(r.converged);
  ASSERT_FALSE(r.stages.empty());
  for (const auto& s : r.stages) EXPECT_LE(s.constraint_error, opts.softassign.tol);
  EXPECT_LT(r.stages.back().entropy, r.stages.front().entropy);
  const Matrix& v = r.final_assignment;
  EXPECT_GE(v.minCoeff(), 0.0);
  EXPECT_LE((v.rowwise().sum().array() - 1.0).abs().maxCoeff(), opts.softassign.tol);
  EXPECT_LE((v.colwise().sum().array() - 1.0).abs().maxCoeff(), opts.softassign.tol);
}

TEST(Tsp, TourIsPermutation) {
  const auto r = solve_tsp(TspInstance::random(10, 7), {});
  std::vector<std::size_t> sorted = r.tour;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Tsp, Deterministic) {
  const auto inst = TspInstance::random(8, 1010);
  const auto a = solve_tsp(inst, {});
  const auto b = solve_tsp(inst, {});
  EXPECT_EQ(a.tour, b.tour);
  EXPECT_EQ(a.final_assignment, b.final_assignment);
}

TEST(ExtractTour, ArgmaxWithoutConflict) {
  Matrix v(3, 3);
  v << 0.1, 0.8, 0.1, 0.7, 0.2, 0.1, 0.2, 0.0, 0.8;
  bool fallback = true;
  const auto tour = extract_tour(v, &fallback);
  EXPECT_FALSE(fallback);
  EXPECT_EQ(tour, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(ExtractTour, ConflictFallsBackToGreedy) {
  Matrix v(3, 3);
  v << 0.6, 0.3, 0.1, 0.5, 0.4, 0.1, 0.1, 0.2, 0.7;
  bool fallback = false;
  const auto tour = extract_tour(v, &fallback);
  EXPECT_TRUE(fallback);
  // Greedy by weight: (2,2)=0.7, (0,0)=0.6, then city 1 takes position 1.
  EXPECT_EQ(tour, (std::vector<std::size_t>{0, 1, 2}));
}

#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "statnet/meanfield.hpp"

using namespace statnet;

namespace {

ConnectionMatrix ferromagnet(double j) {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 1) = t(1, 0) = j;
  return ConnectionMatrix(t);
}

Vector random_interior(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = u(rng);
  return v;
}

}  // namespace

TEST(Phi, SymmetricPoints) {
  for (double beta : {0.5, 1.0, 3.0}) {
    const InverseTemperature b(beta);
    EXPECT_NEAR(phi_potential(ActivationKind::bipolar, b, 0.0), -std::log(2.0) / beta, 1e-15);
    EXPECT_NEAR(phi_potential(ActivationKind::unipolar, b, 0.5), -std::log(2.0) / beta, 1e-15);
  }
}

TEST(Phi, DerivativeMatchesFiniteDifference) {
  const InverseTemperature b(1.0);
  const double fd =
      oracle::central_difference([&](double v) { return phi_potential(ActivationKind::bipolar, b, v); }, 0.5, 1e-6);
  EXPECT_NEAR(fd, 0.549306, 1e-6);
  EXPECT_NEAR(fd, phi_derivative(ActivationKind::bipolar, b, 0.5), 1e-6);

  for (double v : {0.1, 0.5, 0.9}) {
    const InverseTemperature b2(2.5);
    const double fdu =
        oracle::central_difference([&](double x) { return phi_potential(ActivationKind::unipolar, b2, x); }, v, 1e-6);
    EXPECT_NEAR(fdu, phi_derivative(ActivationKind::unipolar, b2, v), 1e-6);
  }
}

TEST(Phi, RejectsBoundary) {
  const InverseTemperature b(1.0);
  EXPECT_THROW(phi_potential(ActivationKind::bipolar, b, 1.0), std::invalid_argument);
  EXPECT_THROW(phi_potential(ActivationKind::bipolar, b, -1.5), std::invalid_argument);
  EXPECT_THROW(phi_potential(ActivationKind::unipolar, b, 0.0), std::invalid_argument);
}

TEST(ActivationFunction, InverseDerivativeAndMonotonicity) {
  for (const auto& g : {tanh_activation(1.7), logistic_activation(0.8), identity_activation()}) {
    double prev = -INFINITY;
    for (double u = -4.0; u <= 4.0; u += 0.25) {
      const double v = g(u);
      EXPECT_GT(v, prev) << g.name;
      prev = v;
      EXPECT_NEAR(g(g.g_inverse(v)), v, 1e-10) << g.name;
      const double fd = oracle::central_difference(g.g, u, 1e-5);
      EXPECT_TRUE(oracle::close_rel(g.g_prime(u), fd, 1e-6, 1e-10)) << g.name << " u=" << u;
    }
  }
}

TEST(ActivationFunction, LegendreConsistency) {
  // Rounding of tanh near +-1 is amplified by cosh^2 in atanh, so the round
  // trip only holds to 1e-10 up to |beta u| of about 7.
  const double beta = 1.3;
  const InverseTemperature b(beta);
  for (double x = -7.0; x <= 7.0; x += 0.125) {
    const double u = x / beta;
    const double v = std::tanh(beta * u);
    EXPECT_NEAR(std::atanh(v), beta * u, 1e-10);
    EXPECT_NEAR(phi_derivative(ActivationKind::bipolar, b, v), u, 1e-10);
  }
}

TEST(ActivationFunction, LogisticClosedFormsAgree) {
  const double beta = 1.9;
  const auto g = logistic_activation(beta);
  for (double u = -5.0; u <= 5.0; u += 0.125) {
    const double a = 1.0 / (1.0 + std::exp(-beta * u));
    const double b = std::exp(beta * u) / (1.0 + std::exp(beta * u));
    EXPECT_NEAR(a, b, 1e-14);
    EXPECT_NEAR(g(u), a, 1e-14);
  }
}

TEST(Activation, ValidatesRange) {
  Vector v(2);
  v << 0.2, 1.0;
  EXPECT_THROW(Activation(v, ActivationKind::bipolar), std::invalid_argument);
  v << 0.2, -0.3;
  EXPECT_THROW(Activation(v, ActivationKind::unipolar), std::invalid_argument);
  EXPECT_NO_THROW(Activation(v, ActivationKind::bipolar));
}

TEST(MftEnergy, EntropyOnlyAtOrigin) {
  const std::size_t n = 5;
  const InverseTemperature b(2.0);
  std::mt19937_64 rng(1);
  const auto t = random_couplings(n, 1.0, rng);
  EXPECT_NEAR(mft_energy(t, Vector::Zero(n), b, Activation::constant(n, 0.0)), -5.0 * std::log(2.0) / 2.0, 1e-14);
}

TEST(MftEnergy, DecoupledMinimumAtTanh) {
  const InverseTemperature b(1.4);
  Vector h(3);
  h << 0.3, -0.8, 1.2;
  const auto t = ConnectionMatrix::zeros(3);
  Vector vstar = (b.value() * h).array().tanh();
  const double e0 = mft_energy(t, h, b, Activation(vstar, ActivationKind::bipolar));
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (double d : {-1e-3, 1e-3}) {
      Vector v = vstar;
      v(i) += d;
      EXPECT_GT(mft_energy(t, h, b, Activation(v, ActivationKind::bipolar)), e0);
    }
  }
}

TEST(MftEnergy, FieldFormAgrees) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_couplings(6, 1.0, rng);
    const auto h = random_field(6, 0.5, rng);
    const InverseTemperature b(0.5 + 0.2 * trial);
    const Vector u = random_field(6, 1.0, rng);
    const Vector v = (b.value() * u).array().tanh();
    EXPECT_NEAR(mft_energy_from_fields(t, h, b, MeanFieldParams{u}),
                mft_energy(t, h, b, Activation(v, ActivationKind::bipolar)), 1e-10);
  }
}

TEST(FixedPoint, DecoupledConvergesInOneSynchronousSweep) {
  const InverseTemperature b(0.9);
  Vector h(4);
  h << 0.5, -0.2, 1.0, 0.0;
  FixedPointConfig cfg;
  cfg.update_order = UpdateOrder::synchronous;
  const auto r = fixed_point_iterate(ConnectionMatrix::zeros(4), h, b, Activation::constant(4, 0.3), cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.sweeps, 1U);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(r.activation.values()(i), std::tanh(0.9 * h(i)), 1e-15);
}

TEST(FixedPoint, FerromagnetMatchesBisection) {
  const double mstar = oracle::bisect([](double m) { return m - std::tanh(2.0 * m); }, 0.5, 1.0);
  EXPECT_NEAR(mstar, 0.957504, 1e-6);
  Vector v0(2);
  v0 << 0.1, 0.1;
  const auto r =
      fixed_point_iterate(ferromagnet(1.0), Vector::Zero(2), InverseTemperature(2.0), Activation(v0, ActivationKind::bipolar), {});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.activation[0], mstar, 1e-7);
  EXPECT_NEAR(r.activation[1], mstar, 1e-7);
}

TEST(FixedPoint, ParamagneticRegimeGoesToOrigin) {
  Vector v0(2);
  v0 << 0.05, -0.02;
  const auto r =
      fixed_point_iterate(ferromagnet(1.0), Vector::Zero(2), InverseTemperature(0.5), Activation(v0, ActivationKind::bipolar), {});
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.activation.values().cwiseAbs().maxCoeff(), 1e-7);
}

TEST(FixedPoint, ConvergedResultSatisfiesResidualAndLowersEnergy) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto t = random_couplings(8, 1.0, rng);
    const auto h = random_field(8, 0.5, rng);
    const InverseTemperature b(trial % 2 ? 0.5 : 1.0);
    const Activation v0(random_interior(8, rng), ActivationKind::bipolar);
    const auto r = fixed_point_iterate(t, h, b, v0, {});
    ASSERT_TRUE(r.converged);
    const Vector target = (b.value() * (t.matrix() * r.activation.values() + h)).array().tanh();
    EXPECT_LE((r.activation.values() - target).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LE(mft_energy(t, h, b, r.activation), mft_energy(t, h, b, v0) + 1e-12);
  }
}

TEST(FixedPoint, UnipolarKind) {
  std::mt19937_64 rng(7);
  const auto t = random_couplings(5, 0.5, rng);
  const auto h = random_field(5, 0.5, rng);
  const InverseTemperature b(1.2);
  const auto r = fixed_point_iterate(t, h, b, Activation::constant(5, 0.5, ActivationKind::unipolar), {});
  ASSERT_TRUE(r.converged);
  const Vector target =
      (1.0 / (1.0 + (-b.value() * (t.matrix() * r.activation.values() + h)).array().exp())).matrix();
  EXPECT_LE((r.activation.values() - target).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(FixedPoint, ExhaustedBudgetIsFlagged) {
  FixedPointConfig cfg;
  cfg.max_sweeps = 1;
  cfg.tol = 1e-15;
  Vector v0(2);
  v0 << 0.1, 0.1;
  const auto r = fixed_point_iterate(ferromagnet(1.0), Vector::Zero(2), InverseTemperature(2.0),
                                     Activation(v0, ActivationKind::bipolar), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.residual, 0.0);
}

TEST(FixedPoint, ConfigValidation) {
  FixedPointConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.damping = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_sweeps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Softmax, Examples) {
  const InverseTemperature b(1.0);
  Vector u = Vector::Constant(5, 3.7);
  const Vector v = softmax_activation(u, b);
  for (Eigen::Index a = 0; a < 5; ++a) EXPECT_NEAR(v(a), 0.2, 1e-15);

  Vector u2(2);
  u2 << 1.0, 0.0;
  const Vector v2 = softmax_activation(u2, b);
  EXPECT_NEAR(v2(0), 0.731059, 1e-6);
  EXPECT_NEAR(v2(1), 0.268941, 1e-6);
  EXPECT_NEAR(v2(0), std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-15);
}

TEST(Softmax, ShiftInvarianceAndArgmax) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector u(6);
    for (Eigen::Index a = 0; a < 6; ++a) u(a) = d(rng);
    const InverseTemperature b(0.3 + 0.1 * trial);
    const Vector v = softmax_activation(u, b);
    EXPECT_NEAR(v.sum(), 1.0, 1e-14);
    EXPECT_GT(v.minCoeff(), 0.0);
    Eigen::Index iu = 0;
    Eigen::Index iv = 0;
    u.maxCoeff(&iu);
    v.maxCoeff(&iv);
    EXPECT_EQ(iu, iv);
    const Vector shifted = softmax_activation((u.array() + 2.0).matrix(), b);
    EXPECT_NEAR((shifted - v).lpNorm<Eigen::Infinity>(), 0.0, 1e-15);
  }
}

TEST(Softmax, TwoStatesReduceToLogistic) {
  for (double beta : {0.4, 1.0, 2.5}) {
    for (double u = -4.0; u <= 4.0; u += 0.5) {
      Vector x(2);
      x << u, 0.0;
      EXPECT_NEAR(softmax_activation(x, InverseTemperature(beta))(0), 1.0 / (1.0 + std::exp(-beta * u)), 1e-12);
    }
  }
}

TEST(Potts, RowsAreDistributions) {
  std::mt19937_64 rng(13);
  Matrix u = Matrix::Random(4, 3);
  const auto p = potts_softmax(u, InverseTemperature(2.0));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(p.values().row(i).sum(), 1.0, 1e-12);
  EXPECT_LT(potts_potential(p, InverseTemperature(2.0)), 0.0);
  Matrix bad = Matrix::Constant(2, 2, 0.6);
  EXPECT_THROW(PottsActivation{bad}, std::invalid_argument);
}

TEST(Softassign, DoublyStochasticInputIsFixed) {
  Matrix m(3, 3);
  m << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
  const auto r = softassign(m, {});
  ASSERT_TRUE(r.converged);
  EXPECT_LE((r.v - m).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Softassign, UniformInput) {
  const auto r = softassign(Matrix::Constant(4, 4, 7.0), {});
  ASSERT_TRUE(r.converged);
  EXPECT_LE((r.v.array() - 0.25).abs().maxCoeff(), 1e-15);
}

TEST(Softassign, TwoByTwoClosedForm) {
  Matrix m(2, 2);
  m << 4.0, 1.0, 1.0, 1.0;
  const Matrix ref = oracle::sinkhorn(m, 200);
  const double x = std::sqrt(4.0) / (std::sqrt(4.0) + 1.0);
  EXPECT_NEAR(ref(0, 0), x, 1e-14);
  EXPECT_NEAR(x, 2.0 / 3.0, 1e-15);
  FixedPointConfig cfg;
  cfg.tol = 1e-12;
  const auto r = softassign(m, cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.v(0, 0), 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(r.v(0, 1), 1.0 / 3.0, 1e-8);
  EXPECT_NEAR(r.v(1, 0), 1.0 / 3.0, 1e-8);
  EXPECT_NEAR(r.v(1, 1), 2.0 / 3.0, 1e-8);
}

TEST(Softassign, MatchesPlainIteration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    Matrix m(n, n);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = d(rng);
    FixedPointConfig cfg;
    cfg.tol = 1e-13;
    const auto r = softassign(m, cfg);
    EXPECT_LE((r.v - oracle::sinkhorn(m, 5000)).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(Softassign, SumsPositivityAndSymmetry) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> d(0.01, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 9;
    Matrix m(n, n);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = d(rng);
    if (trial % 2 == 0) m = (m + m.transpose()).eval();
    FixedPointConfig cfg;
    cfg.tol = 1e-10;
    const auto r = softassign(m, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_GT(r.v.minCoeff(), 0.0);
    EXPECT_LE((r.v.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-6);
    EXPECT_LE((r.v.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-6);
    if (trial % 2 == 0) {
      EXPECT_LE((r.v - r.v.transpose()).lpNorm<Eigen::Infinity>(), 1e-8);
    }
  }
}

TEST(Softassign, RejectsNonPositive) {
  Matrix m = Matrix::Ones(3, 3);
  m(1, 2) = 0.0;
  EXPECT_THROW(softassign(m, {}), std::invalid_argument);
}

TEST(Softassign, LogDomainHandlesHugeExponents) {
  Matrix u(3, 3);
  u << 0, 1, 2, 2, 0, 1, 1, 2, 0;
  const auto r = softassign_log(800.0 * u, {});
  ASSERT_TRUE(r.v.allFinite());
  EXPECT_LE((r.v.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
}

TEST(Bound, ExactForNonInteractingSystem) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = random_field(6, 1.0, rng);
    const InverseTemperature b(0.5 + trial * 0.3);
    const Vector v = (b.value() * h).array().tanh();
    const auto check = verify_bound(ConnectionMatrix::zeros(6), h, b, Activation(v, ActivationKind::bipolar));
    EXPECT_NEAR(check.gap, 0.0, 1e-9);
  }
}

TEST(Bound, HoldsAtFixedPointsAndRandomPoints) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_couplings(8, 1.0, rng);
    const auto h = random_field(8, 0.5, rng);
    const InverseTemperature b(std::array<double, 3>{0.5, 1.0, 2.0}[static_cast<std::size_t>(trial % 3)]);
    const auto exact = brute_force_partition(t, h, b);
    const auto fp = fixed_point_iterate(t, h, b, Activation::constant(8, 0.0), {});
    EXPECT_GE(verify_bound(t, h, exact, fp.activation).gap, -1e-9);
    for (int k = 0; k < 10; ++k) {
      EXPECT_GE(verify_bound(t, h, exact, Activation(random_interior(8, rng), ActivationKind::bipolar)).gap, -1e-9);
    }
  }
}

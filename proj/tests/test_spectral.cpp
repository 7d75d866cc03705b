#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "percbound/spectral.hpp"

using namespace percbound;

namespace {

// Sparse random fill on top of a random Hamiltonian cycle, so the matrix is
// irreducible and its Perron root simple.
std::vector<double> random_dense(std::mt19937_64& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> d(n * n, 0.0);
  for (double& v : d)
    if (u(rng) < density) v = u(rng);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < n; ++i) d[perm[i] * n + perm[(i + 1) % n]] = 0.05 + u(rng);
  return d;
}

Eigen::MatrixXd to_eigen(std::size_t n, const std::vector<double>& d) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d[i * n + j];
  return m;
}

double plain_two_radius(double p) {
  const double q = 1 - p;
  const double a = 2 * p - p * p, b = p * p, c = 2 * p * q * q, d = p * p * (3 - 2 * p);
  return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * c);
}

}  // namespace

TEST(Spectral, AgreesWithDenseEigensolver) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 50;
    const auto d = random_dense(rng, n, 0.35);
    const SpectralReport r = spectral_radius(NumericMatrix::from_dense(n, d));
    ASSERT_TRUE(r.converged) << "trial " << trial;
    EXPECT_NEAR(r.radius_estimate, testing_oracles::dense_radius(to_eigen(n, d)), 1e-8) << "trial " << trial;
  }
}

TEST(Spectral, ShiftMovesRadiusByShift) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial;
    auto d = random_dense(rng, n, 0.5);
    const double base = spectral_radius(NumericMatrix::from_dense(n, d)).radius_estimate;
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] += 0.25;
    const double shifted = spectral_radius(NumericMatrix::from_dense(n, d)).radius_estimate;
    EXPECT_NEAR(shifted - base, 0.25, 1e-9);
  }
}

TEST(Spectral, MonotoneUnderEntrywiseIncrease) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial;
    auto d = random_dense(rng, n, 0.4);
    const double before = spectral_radius(NumericMatrix::from_dense(n, d)).radius_estimate;
    for (double& v : d) v += u(rng);
    EXPECT_GE(spectral_radius(NumericMatrix::from_dense(n, d)).radius_estimate, before - 1e-12);
  }
}

TEST(Spectral, PlainTwoClosedForm) {
  const MeanMatrix m = build_matrix(parse_model("bond-vl2"), SpaceSpec::plain(2), {1});
  for (int g = 1; g <= 19; ++g) {
    const double p = 0.05 * g;
    EXPECT_NEAR(spectral_radius(evaluate(m, p)).radius_estimate, plain_two_radius(p), 1e-10);
  }
  const NumericMatrix half = evaluate(m, 0.5);
  EXPECT_DOUBLE_EQ(half.at(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(half.at(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(half.at(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(half.at(1, 1), 0.5);
}

TEST(Spectral, PeriodicAndNilpotentMatrices) {
  // a 3-cycle has eigenvalues on the unit circle; the shift breaks the tie
  const std::vector<double> cycle{0, 2, 0, 0, 0, 2, 2, 0, 0};
  EXPECT_NEAR(spectral_radius(NumericMatrix::from_dense(3, cycle)).radius_estimate, 2.0, 1e-9);
  // nilpotent: the shifted iterate approaches the shift only like 1/k, so the
  // estimate does not settle, but the bracket still decides subcriticality
  const std::vector<double> nil{0, 1, 0, 0, 0, 1, 0, 0, 0};
  const SpectralReport r = spectral_radius(NumericMatrix::from_dense(3, nil));
  EXPECT_FALSE(r.converged);
  EXPECT_LT(r.radius_estimate, 1e-6);
  const Certificate c = is_subcritical(NumericMatrix::from_dense(3, nil), 1e-6);
  EXPECT_TRUE(c.decided_early);
  EXPECT_TRUE(c.subcritical);
  EXPECT_TRUE(spectral_radius(NumericMatrix{}).converged);
}

TEST(Spectral, ThreadCountDoesNotChangeTheResult) {
  std::mt19937_64 rng(3);
  const std::size_t n = 5000;
  // sparse banded matrix large enough to span several chunks
  std::vector<double> d(n * n, 0.0);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : {i, (i + 1) % n, (i + 17) % n}) d[i * n + j] = u(rng);
  const NumericMatrix m = NumericMatrix::from_dense(n, d);
  SpectralOptions one, four;
  four.threads = 4;
  EXPECT_EQ(spectral_radius(m, one), spectral_radius(m, four));
}

TEST(Spectral, CollatzWielandtBracketHoldsTheRadius) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 30;
    const auto d = random_dense(rng, n, 0.5);
    const double rho = testing_oracles::dense_radius(to_eigen(n, d));
    const Certificate c = is_subcritical(NumericMatrix::from_dense(n, d), 1e-6);
    if (c.bracket.valid) {
      EXPECT_LE(c.bracket.lower, rho + 1e-9);
      EXPECT_GE(c.bracket.upper, rho - 1e-9);
    }
    EXPECT_EQ(c.subcritical, rho < 1 - 1e-6);
  }
}

TEST(Spectral, JordanBlockIsDecidedByTheBracket) {
  // repeated Perron root 0.8 coupled one way: power iteration converges like 1/k
  const std::vector<double> d{0.8, 1.0, 0.0, 0.8};
  SpectralOptions o;
  o.max_iter = 2000;
  EXPECT_FALSE(spectral_radius(NumericMatrix::from_dense(2, d), o).converged);
  const Certificate c = is_subcritical(NumericMatrix::from_dense(2, d), 1e-6, o);
  EXPECT_TRUE(c.decided());
  EXPECT_TRUE(c.decided_early);
  EXPECT_TRUE(c.subcritical);
  const Certificate strict = is_subcritical(NumericMatrix::from_dense(2, d), 1e-6, o, nullptr, false);
  EXPECT_FALSE(strict.decided());
  EXPECT_FALSE(strict.subcritical);
}

TEST(Spectral, EvaluateRejectsOutOfRangeParameters) {
  const MeanMatrix m = build_matrix(parse_model("bond-vl2"), SpaceSpec::plain(2), {1});
  EXPECT_THROW(evaluate(m, 1.5), InvalidArgument);
  EXPECT_THROW(is_subcritical(evaluate(m, 0.5), 0.0), InvalidArgument);
}

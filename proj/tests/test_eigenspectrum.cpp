#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "primecoh/eigenspectrum.hpp"

using namespace primecoh;

namespace {
const OperatorSpec kSpec{Normalization::Combinatorial, Order::Two};
}

TEST(SymmetricEigenvalues, DiagonalIsSorted) {
  Eigen::MatrixXd m = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto s = symmetric_eigenvalues(m, kSpec);
  EXPECT_EQ(s.eigenvalues, (std::vector<double>{1, 2, 3}));
}

TEST(SymmetricEigenvalues, TwoByTwoClosedForm) {
  const double k = 0.35;
  Eigen::MatrixXd m(2, 2);
  m << 1, k, k, 1;
  m /= 1 + k;
  const auto s = symmetric_eigenvalues(m, kSpec);
  EXPECT_NEAR(s.eigenvalues[0], (1 - k) / (1 + k), 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-15);
}

TEST(SymmetricEigenvalues, PathLaplacianMatchesAnalyticSpectrum) {
  const int n = 50;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2;
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -1;
  }
  const auto s = symmetric_eigenvalues(m, kSpec);
  for (int k = 1; k <= n; ++k)
    EXPECT_NEAR(s.eigenvalues[k - 1], 2 - 2 * std::cos(k * std::numbers::pi / (n + 1)), 1e-10);
}

TEST(SymmetricEigenvalues, RejectsAsymmetricAndIndefinite) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0.5, 0.4, 1;
  EXPECT_THROW(symmetric_eigenvalues(a, kSpec), InvalidArgument);
  Eigen::MatrixXd neg = Eigen::Vector2d(-1e-3, 1).asDiagonal();
  EXPECT_THROW(symmetric_eigenvalues(neg, kSpec), NumericalFailure);
}

TEST(SymmetricEigenvalues, ClampsRoundingNegatives) {
  Eigen::MatrixXd m = Eigen::Vector3d(-5e-10, 0.5, 2).asDiagonal();
  const auto s = symmetric_eigenvalues(m, kSpec);
  EXPECT_EQ(s.eigenvalues[0], 0.0);
}

TEST(SymmetricEigenvalues, DuplicatesPreserved) {
  Eigen::MatrixXd m = Eigen::Vector4d(1, 1, 1, 0).asDiagonal();
  const auto s = symmetric_eigenvalues(m, kSpec);
  EXPECT_EQ(s.eigenvalues, (std::vector<double>{0, 1, 1, 1}));
}

TEST(SymmetricEigenvalues, TraceAndFrobeniusInvariants) {
  const auto k = coherence_kernel(divergence_matrix(first_n_primes(150), DivergenceModel::entropic()), 1.0);
  for (auto spec : {OperatorSpec{Normalization::SymmetricNormalized, Order::Four},
                    OperatorSpec{Normalization::Combinatorial, Order::Two}}) {
    const auto op = build_operator(k, spec);
    const auto s = symmetric_eigenvalues(op);
    ASSERT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    double sum = 0, sq = 0;
    for (double x : s.eigenvalues) sum += x, sq += x * x;
    EXPECT_LE(std::abs(sum - op.h.trace()), 1e-8 * std::abs(op.h.trace()));
    EXPECT_LE(std::abs(sq - op.h.squaredNorm()), 1e-8 * op.h.squaredNorm());
  }
}

TEST(CountingFunction, BoundaryConventions) {
  SpectralSystem s{{0.0, 1.0, 1.0, 4.0}, kSpec, {}};
  EXPECT_EQ(counting_function(s, -1.0), 0u);
  EXPECT_EQ(counting_function(s, 0.0), 1u);
  EXPECT_EQ(counting_function(s, 1.0), 3u);
  EXPECT_EQ(counting_function(s, 3.9), 3u);
  EXPECT_EQ(counting_function(s, 4.0), 4u);
  EXPECT_EQ(counting_function(s, 1e300), 4u);
  std::size_t prev = 0;
  for (double l = -1; l < 5; l += 0.01) {
    const auto c = counting_function(s, l);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

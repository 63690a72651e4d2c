#include <gtest/gtest.h>

#include <cmath>

#include "primecoh/fits.hpp"
#include "primecoh/observables.hpp"

using namespace primecoh;

namespace {

SpectralSystem spectrum(std::vector<double> eig) {
  return {std::move(eig), {Normalization::SymmetricNormalized, Order::Four}, {}};
}

SpectralSystem prime_system(std::size_t n, const DivergenceModel& m) {
  const auto k = coherence_kernel(divergence_matrix(first_n_primes(n), m), 1.0);
  return symmetric_eigenvalues(
      build_operator(k, {Normalization::SymmetricNormalized, Order::Four}));
}

// -sum p log p with p_k = exp(-t l_k) / Theta, summed directly.
double entropy_oracle(const std::vector<double>& eig, double t) {
  double z = 0.0;
  for (double l : eig) z += std::exp(-t * l);
  double s = 0.0;
  for (double l : eig) {
    const double p = std::exp(-t * l) / z;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace

TEST(TimeGrid, LogSpacedWithConstantRatio) {
  const auto g = default_grid();
  ASSERT_EQ(g.size(), 200u);
  EXPECT_DOUBLE_EQ(g.t_min(), 1e-4);
  EXPECT_DOUBLE_EQ(g.t_max(), 1e4);
  const double r = g.points[1] / g.points[0];
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_GT(g.points[i], g.points[i - 1]);
    EXPECT_NEAR(g.points[i] / g.points[i - 1], r, 1e-12);
  }
  EXPECT_THROW(log_grid(0.0, 1.0, 10), InvalidArgument);
  EXPECT_THROW(log_grid(1.0, 1.0, 10), InvalidArgument);
}

TEST(HeatTrace, HandSums) {
  EXPECT_NEAR(heat_trace(spectrum({1.0}), 1.0), std::exp(-1.0), 1e-16);
  EXPECT_EQ(heat_trace(spectrum({0, 0, 0, 0}), 3.7), 4.0);
  EXPECT_NEAR(heat_trace(spectrum({0, 1, 4}), 0.5), 1.741865942949246, 1e-15);
  EXPECT_THROW(heat_trace(spectrum({1.0}), 0.0), InvalidArgument);
  EXPECT_THROW(heat_trace(spectrum({1.0}), -1.0), InvalidArgument);
}

TEST(SpectralDimensionExact, HandValues) {
  for (double t : {1e-3, 0.7, 20.0}) EXPECT_NEAR(spectral_dimension_exact(spectrum({2.5}), t), 5.0 * t, 1e-12 * t);
  EXPECT_EQ(spectral_dimension_exact(spectrum({0, 0, 0}), 2.0), 0.0);
  EXPECT_NEAR(spectral_dimension_exact(spectrum({0, 1, 4}), 0.5), 0.6589897444780173, 1e-15);
  EXPECT_THROW(spectral_dimension_exact(spectrum({1.0}), 0.0), InvalidArgument);
}

TEST(GibbsEntropy, HandValuesAndOracle) {
  EXPECT_NEAR(gibbs_entropy(spectrum({0, 0, 0, 0, 0}), 1.3), std::log(5.0), 1e-15);
  EXPECT_EQ(gibbs_entropy(spectrum({0.8}), 4.0), 0.0);
  EXPECT_NEAR(gibbs_entropy(spectrum({0, 1, 4}), 0.5), 0.8844517918809992, 1e-14);
  EXPECT_THROW(gibbs_entropy(spectrum({1.0}), -2.0), InvalidArgument);

  const auto s = prime_system(200, DivergenceModel::entropic());
  for (double t : default_grid().points) {
    const double e = gibbs_entropy(s, t);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, std::log(200.0) + 1e-12);
    EXPECT_NEAR(e, entropy_oracle(s.eigenvalues, t), 1e-10);
  }
}

TEST(SpectralDimensionFd, PowerLawAndConstant) {
  const auto g = log_grid(1e-3, 1e3, 61);
  std::vector<ProfileRow> power, flat;
  for (double t : g.points) {
    power.push_back({t, 3.0 * std::pow(t, -0.25), 0, 0, 0});
    flat.push_back({t, 7.0, 0, 0, 0});
  }
  const auto fp = spectral_dimension_fd(power);
  const auto ff = spectral_dimension_fd(flat);
  for (std::size_t i = 0; i < fp.size(); ++i) {
    EXPECT_NEAR(fp[i], 0.5, 1e-10);
    EXPECT_NEAR(ff[i], 0.0, 1e-12);
  }
  EXPECT_THROW(spectral_dimension_fd(std::span(power).first(2)), InvalidArgument);
}

TEST(SpectralDimensionFd, AgreesWithExactOnPrimeSystem) {
  const auto p = profile(prime_system(500, DivergenceModel::entropic()), default_grid());
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < p.rows.size(); ++i)
    worst = std::max(worst, std::abs(p.rows[i].ds_fd - p.rows[i].ds_exact));
  EXPECT_LT(worst, 1e-3);
}

TEST(Profile, SingletonSystem) {
  const auto p = profile(spectrum({0.0}), default_grid());
  for (const auto& r : p.rows) {
    EXPECT_EQ(r.theta, 1.0);
    EXPECT_EQ(r.ds_exact, 0.0);
    EXPECT_EQ(r.entropy, 0.0);
  }
}

TEST(Profile, InvariantsOnNormalizedSystems) {
  for (const auto& m : {DivergenceModel::entropic(), DivergenceModel::log_ratio_squared(),
                        DivergenceModel::index_power(2.0)}) {
    const auto s = prime_system(300, m);
    const auto p = profile(s, default_grid());
    const double n = 300.0;
    double tr = 0.0, tr2 = 0.0;
    for (double l : s.eigenvalues) tr += l, tr2 += l * l;
    const double t0 = p.rows.front().t;
    EXPECT_LE(std::abs(p.rows.front().theta - (n - t0 * tr)), t0 * t0 * tr2 / 2.0);
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      const auto& r = p.rows[i];
      EXPECT_GE(r.theta, n * std::exp(-4.0 * r.t) * (1 - 1e-12));
      EXPECT_LE(r.theta, n);
      EXPECT_GE(r.ds_exact, 0.0);
      if (i > 0) {
        EXPECT_LE(r.entropy, p.rows[i - 1].entropy + 1e-12);
        EXPECT_LE(r.theta, p.rows[i - 1].theta);
      }
    }
    EXPECT_LT(spectral_dimension_exact(s, 1e-8), 1e-4);
  }
}

TEST(Profile, ThetaStrictlyDecreasesWhileNotSaturated) {
  const auto p = profile(spectrum({0.0, 0.5, 1.0, 3.0}), log_grid(1e-3, 10, 40));
  for (std::size_t i = 1; i < p.rows.size(); ++i) EXPECT_LT(p.rows[i].theta, p.rows[i - 1].theta);
}

TEST(Profile, LargeTWithoutZeroModeStaysFinite) {
  const auto p = profile(spectrum({0.5, 1.0, 2.0}), log_grid(1e-2, 1e4, 50));
  for (const auto& r : p.rows) {
    EXPECT_TRUE(std::isfinite(r.ds_exact));
    EXPECT_TRUE(std::isfinite(r.ds_fd));
  }
  EXPECT_NEAR(p.rows.back().ds_exact, 2.0 * 1e4 * 0.5, 1e-6);
  // The one-sided endpoint stencil sees log Theta curving in log t.
  EXPECT_NEAR(p.rows.back().ds_fd / p.rows.back().ds_exact, 1.0, 0.05);
}

// lambda_k = k^alpha: log-log slope of Theta on a mid-t window gives
// d_s = 2/alpha.
TEST(Profile, PowerLawSpectrumGivesTwoOverAlpha) {
  for (double alpha : {2.0, 4.0}) {
    std::vector<double> eig;
    for (int k = 1; k <= 4000; ++k) eig.push_back(std::pow(k, alpha));
    const auto s = spectrum(eig);
    const double t_hi = std::pow(50.0, -alpha);   // Theta ~ 50
    const double t_lo = std::pow(1000.0, -alpha); // well above 1/lambda_max
    const auto p = profile(s, log_grid(t_lo, t_hi, 40));
    std::vector<double> x, y;
    for (const auto& r : p.rows) x.push_back(std::log(r.t)), y.push_back(std::log(r.theta));
    const double ds = -2.0 * least_squares_line(x, y).slope;
    EXPECT_NEAR(ds, 2.0 / alpha, 0.02 * 2.0 / alpha) << alpha;
  }
}

TEST(Profile, CsvHeaderAndPrecision) {
  const auto p = profile(spectrum({0.0, 1.0}), log_grid(0.1, 10, 3));
  std::ostringstream os;
  write_profile_csv(os, p);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,theta,ds_exact,ds_fd,entropy");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_NE(text.find("0.10000000000000001,"), std::string::npos);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "primecoh/divergence.hpp"
#include "primecoh/eigenspectrum.hpp"
#include "primecoh/errors.hpp"
#include "primecoh/observables.hpp"
#include "primecoh/rng.hpp"

namespace primecoh {

// ---------------------------------------------------------------------------
// GUE-induced divergence

struct GueDraw {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> eigenvalues;
  double delta_bulk = 0.0;  // mean consecutive spacing over the central half
};

/// Mean consecutive spacing over the central 50% of an ascending list.
inline double bulk_mean_spacing(std::span<const double> eig) {
  const std::size_t n = eig.size();
  if (n < 2) throw InvalidArgument("bulk_mean_spacing: need >= 2 eigenvalues");
  std::size_t lo = n / 4;
  std::size_t hi = (3 * n) / 4;
  if (hi <= lo) lo = 0, hi = n - 1;
  return (eig[hi] - eig[lo]) / static_cast<double>(hi - lo);
}

/// Eigenvalues of an n x n GUE matrix: real N(0,1) diagonal, off-diagonal
/// real and imaginary parts independent N(0,1/2). The semicircle support is
/// [-2 sqrt(n), 2 sqrt(n)].
inline GueDraw gue_eigenvalues(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("gue_eigenvalues: n must be >= 2");
  NormalSampler normal(seed);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd h(m, m);
  const double off_sd = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < m; ++i) {
    h(i, i) = normal();
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double re = off_sd * normal();
      const double im = off_sd * normal();
      h(i, j) = {re, im};
      h(j, i) = {re, -im};
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("gue_eigenvalues: eigensolver did not converge (seed=" +
                           std::to_string(seed) + ")");
  GueDraw d{n, seed, {}, 0.0};
  d.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  d.delta_bulk = bulk_mean_spacing(d.eigenvalues);
  return d;
}

inline DivergenceModel gue_model(const GueDraw& draw) {
  return DivergenceModel::external(draw.eigenvalues, draw.delta_bulk);
}

/// delta_ij = ((g_i - g_j) / delta_bulk)^2.
inline DivergenceMatrix gue_divergence(const GueDraw& draw) {
  return divergence_matrix(PrimeSet{}, gue_model(draw));
}

// ---------------------------------------------------------------------------
// 1D bi-Laplacian

/// Squared Dirichlet path Laplacian (tridiagonal 2, -1), dense.
inline Eigen::MatrixXd bilaplacian_matrix(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    l(i, i) = 2.0;
    if (i + 1 < m) l(i, i + 1) = l(i + 1, i) = -1.0;
  }
  return l * l;
}

/// Closed-form spectrum (2 - 2cos(k pi/(n+1)))^2, k = 1..n, ascending.
inline SpectralSystem bilaplacian_control(std::size_t n) {
  if (n < 2) throw InvalidArgument("bilaplacian_control: n must be >= 2");
  SpectralSystem s;
  s.spec = {Normalization::Combinatorial, Order::Four};
  s.provenance.model = "bilaplacian";
  s.eigenvalues.reserve(n);
  const double step = std::numbers::pi / static_cast<double>(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    // 2 - 2cos(x) = 4 sin^2(x/2) avoids cancellation at small k.
    const double s2 = 2.0 * std::sin(0.5 * step * static_cast<double>(k));
    const double g = s2 * s2;
    s.eigenvalues.push_back(g * g);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Spacing statistics

/// lambda_k * 2 pi / log n.
inline std::vector<double> rescale_eigenvalues(const SpectralSystem& s, std::size_t n) {
  if (n < 2) throw InvalidArgument("rescale_eigenvalues: n must be >= 2");
  const double factor = 2.0 * std::numbers::pi / std::log(static_cast<double>(n));
  std::vector<double> out(s.eigenvalues);
  for (double& x : out) x *= factor;
  return out;
}

enum class Unfolding { GlobalMean, LocalWindow };

inline std::string_view to_string(Unfolding u) {
  return u == Unfolding::GlobalMean ? "global-mean" : "local-window";
}

struct SpacingSample {
  std::vector<double> spacings;
  Unfolding unfolding = Unfolding::GlobalMean;
};

/// Nearest-neighbour spacings over the central `window` fraction of the
/// spectrum, unfolded to unit mean either globally or by a moving average
/// over ceil(n/20) neighbouring spacings.
inline SpacingSample nn_spacings(std::span<const double> eig, Unfolding unfolding,
                                 double window = 0.5) {
  const std::size_t n = eig.size();
  if (n < 50)
    throw InsufficientData("nn_spacings: " + std::to_string(n) + " eigenvalues, need 50");
  if (!(window > 0.0 && window <= 1.0))
    throw InvalidArgument("nn_spacings: window must be in (0, 1]");
  std::vector<double> gaps(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = eig[i + 1] - eig[i];
  const std::size_t m = gaps.size();
  const auto lo = static_cast<std::size_t>(std::floor(0.5 * (1.0 - window) * static_cast<double>(m)));
  const std::size_t hi = m - lo;

  SpacingSample out{{}, unfolding};
  out.spacings.reserve(hi - lo);
  if (unfolding == Unfolding::GlobalMean) {
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += gaps[i];
    mean /= static_cast<double>(hi - lo);
    if (!(mean > 0.0)) throw InsufficientData("nn_spacings: all spacings are zero");
    for (std::size_t i = lo; i < hi; ++i) out.spacings.push_back(gaps[i] / mean);
    return out;
  }

  const std::size_t width = std::min(m, (n + 19) / 20);
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + gaps[i];
  for (std::size_t i = lo; i < hi; ++i) {
    // Window of `width` spacings centred on i, slid inside [0, m).
    std::size_t a = i >= width / 2 ? i - width / 2 : 0;
    if (a + width > m) a = m - width;
    const double local = (prefix[a + width] - prefix[a]) / static_cast<double>(width);
    out.spacings.push_back(local > 0.0 ? gaps[i] / local : 0.0);
  }
  return out;
}

/// GUE Wigner surmise density (32/pi^2) s^2 exp(-4 s^2/pi).
inline double wigner_surmise_pdf(double s) {
  if (s < 0.0) return 0.0;
  const double pi = std::numbers::pi;
  return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
}

/// Its CDF erf(2s/sqrt(pi)) - (4s/pi) exp(-4 s^2/pi).
inline double wigner_surmise_cdf(double s) {
  if (s <= 0.0) return 0.0;
  const double pi = std::numbers::pi;
  return std::erf(2.0 * s / std::sqrt(pi)) - 4.0 * s / pi * std::exp(-4.0 * s * s / pi);
}

struct KsResult {
  double d_statistic = 0.0;
  std::size_t sample_size = 0;
};

/// Sup distance between the sample's empirical CDF and the surmise CDF.
inline KsResult ks_distance_wigner(const SpacingSample& sample) {
  if (sample.spacings.empty()) throw InsufficientData("ks_distance_wigner: empty sample");
  std::vector<double> s(sample.spacings);
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = wigner_surmise_cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {std::clamp(d, 0.0, 1.0), s.size()};
}

// ---------------------------------------------------------------------------
// Profile morphology, for the ordinal comparisons between systems

struct ProfileShape {
  double peak_ds = 0.0;
  double peak_t = 0.0;
  // Width of the region where d_s >= peak/2, in decades of t.
  double fwhm_decades = 0.0;
};

inline ProfileShape profile_shape(const ObservableProfile& p) {
  if (p.rows.empty()) throw InsufficientData("profile_shape: empty profile");
  ProfileShape s;
  for (const auto& r : p.rows)
    if (r.ds_exact > s.peak_ds) s.peak_ds = r.ds_exact, s.peak_t = r.t;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& r : p.rows) {
    if (r.ds_exact < 0.5 * s.peak_ds) continue;
    if (!any) lo = r.t, any = true;
    hi = r.t;
  }
  s.fwhm_decades = any ? std::log10(hi / lo) : 0.0;
  return s;
}

}  // namespace primecoh

namespace primecoh {

/// Longest contiguous stretch of grid points with lo <= d_s <= hi, in
/// decades of t. A single point counts as zero decades.
inline double band_decades(const ObservableProfile& p, double lo, double hi) {
  double best = 0.0;
  std::size_t start = 0;
  bool inside = false;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const bool in = p.rows[i].ds_exact >= lo && p.rows[i].ds_exact <= hi;
    if (in && !inside) start = i, inside = true;
    if (!in) inside = false;
    if (inside) best = std::max(best, std::log10(p.rows[i].t / p.rows[start].t));
  }
  return best;
}

}  // namespace primecoh

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primecoh/eigenspectrum.hpp"
#include "primecoh/errors.hpp"
#include "primecoh/nelder_mead.hpp"
#include "primecoh/observables.hpp"

namespace primecoh {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw InsufficientData("least_squares_line: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx, sxy += dx * dy, syy += dy * dy;
  }
  if (sxx == 0.0) throw InsufficientData("least_squares_line: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  // A constant response is fitted perfectly by a flat line.
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Eigenvalue growth lambda_k ~ k^alpha

/// 1-based inclusive index range.
struct IndexWindow {
  std::size_t first = 1;
  std::size_t last = 1;
};

struct PowerLawFit {
  double alpha = 0.0;
  double ds_from_alpha = 0.0;
  IndexWindow window;
  double r_squared = 0.0;
  std::size_t points_used = 0;
};

inline IndexWindow default_growth_window(std::size_t n) {
  return {std::max<std::size_t>(1, (n + 3) / 4), (3 * n) / 4};
}

/// Log-log OLS of lambda_k on k over the window, skipping eigenvalues below
/// 1e-12 (zero modes).
inline PowerLawFit fit_eigenvalue_growth(const SpectralSystem& s,
                                         std::optional<IndexWindow> window = std::nullopt) {
  const std::size_t n = s.size();
  const IndexWindow w = window.value_or(default_growth_window(n));
  if (w.first < 1 || w.last > n || w.first > w.last)
    throw InsufficientData("fit_eigenvalue_growth: window outside [1, n]");
  std::vector<double> lx, ly;
  for (std::size_t k = w.first; k <= w.last; ++k) {
    const double lambda = s.eigenvalues[k - 1];
    if (lambda < 1e-12) continue;
    lx.push_back(std::log(static_cast<double>(k)));
    ly.push_back(std::log(lambda));
  }
  if (lx.size() < 10)
    throw InsufficientData("fit_eigenvalue_growth: " + std::to_string(lx.size()) +
                           " usable eigenvalues in window, need 10");
  const auto line = least_squares_line(lx, ly);
  return {line.slope, 2.0 / line.slope, w, line.r_squared, lx.size()};
}

// ---------------------------------------------------------------------------
// Entropy exponent S(t) ~ log(1/t)^beta

struct EntropyExponentFit {
  double beta = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
};

inline constexpr double kDefaultEntropyWindowLo = 1e-4;
inline constexpr double kDefaultEntropyWindowHi = 1e-1;

/// OLS of log S against log log(1/t) over grid points with t in
/// [t_lo, t_hi] (bounds matched with a 1e-9 relative slack).
inline EntropyExponentFit fit_entropy_exponent(const ObservableProfile& p,
                                               double t_lo = kDefaultEntropyWindowLo,
                                               double t_hi = kDefaultEntropyWindowHi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !(t_hi < 1.0))
    throw InsufficientData("fit_entropy_exponent: window must satisfy 0 < t_lo < t_hi < 1");
  std::vector<double> lx, ly;
  for (const auto& r : p.rows) {
    if (r.t < t_lo * (1.0 - 1e-9) || r.t > t_hi * (1.0 + 1e-9)) continue;
    if (!(r.entropy > 0.0))
      throw InsufficientData("fit_entropy_exponent: entropy not positive at t=" +
                             std::to_string(r.t));
    lx.push_back(std::log(std::log(1.0 / r.t)));
    ly.push_back(std::log(r.entropy));
  }
  if (lx.size() < 10)
    throw InsufficientData("fit_entropy_exponent: " + std::to_string(lx.size()) +
                           " grid points in window, need 10");
  const auto line = least_squares_line(lx, ly);
  return {line.slope, t_lo, t_hi, line.r_squared, lx.size()};
}

// ---------------------------------------------------------------------------
// Four-parameter profile model d_s(t) = A (t/tau)^alpha exp(-(t/tau)^beta)

struct PcpParams {
  double amplitude = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double tau = 1.0;
};

inline double pcp_model(const PcpParams& q, double t) {
  const double x = t / q.tau;
  return q.amplitude * std::pow(x, q.alpha) * std::exp(-std::pow(x, q.beta));
}

struct PcpFit {
  PcpParams params;
  double r_squared_log = 0.0;
  double residual = 0.0;  // sum of squared log residuals
  bool converged = false;
  bool at_bound = false;
  std::size_t starts_tried = 0;
  std::size_t points_used = 0;
  std::vector<double> start_residuals;
};

inline constexpr double kPcpSupportFloor = 1e-6;
// Box on each log-parameter; reaching it marks the fit as a boundary solution.
inline constexpr double kPcpLogBound = 30.0;

namespace detail {

struct PcpData {
  std::vector<double> log_t;
  std::vector<double> log_ds;
};

inline double pcp_log_residual(const PcpData& d, const std::array<double, 4>& q) {
  for (double v : q)
    if (!(std::abs(v) <= kPcpLogBound)) return std::numeric_limits<double>::infinity();
  const double log_a = q[0];
  const double alpha = std::exp(q[1]);
  const double beta = std::exp(q[2]);
  const double log_tau = q[3];
  double ss = 0.0;
  for (std::size_t i = 0; i < d.log_t.size(); ++i) {
    const double lx = d.log_t[i] - log_tau;
    const double model = log_a + alpha * lx - std::exp(beta * lx);
    const double r = d.log_ds[i] - model;
    ss += r * r;
  }
  return std::isfinite(ss) ? ss : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Least squares in log d_s over points with d_s > 1e-6, searched in
/// log-parameter space by Nelder-Mead from a fixed grid of starts
/// (A in {0.1, 1, 10}, alpha in {1, 3}, beta in {1, 2}, tau at the profile
/// peak). The best end point across starts is returned.
inline PcpFit fit_pcp(const ObservableProfile& p, const NelderMeadOptions& opt = {}) {
  detail::PcpData data;
  double peak_t = 0.0, peak_ds = -1.0;
  for (const auto& r : p.rows) {
    if (r.ds_exact > peak_ds) peak_ds = r.ds_exact, peak_t = r.t;
    if (r.ds_exact > kPcpSupportFloor) {
      data.log_t.push_back(std::log(r.t));
      data.log_ds.push_back(std::log(r.ds_exact));
    }
  }
  if (data.log_t.size() < 20)
    throw InsufficientData("fit_pcp: " + std::to_string(data.log_t.size()) +
                           " points with d_s > 1e-6, need 20");

  auto objective = [&](const std::array<double, 4>& q) {
    return detail::pcp_log_residual(data, q);
  };

  PcpFit fit;
  fit.points_used = data.log_t.size();
  NelderMeadResult<4> best;
  best.value = std::numeric_limits<double>::infinity();
  for (double a : {0.1, 1.0, 10.0}) {
    for (double alpha : {1.0, 3.0}) {
      for (double beta : {1.0, 2.0}) {
        const std::array<double, 4> start{std::log(a), std::log(alpha), std::log(beta),
                                          std::log(peak_t)};
        fit.start_residuals.push_back(objective(start));
        const auto r = nelder_mead(objective, start, opt);
        ++fit.starts_tried;
        if (r.value < best.value) best = r;
      }
    }
  }

  fit.params = {std::exp(best.x[0]), std::exp(best.x[1]), std::exp(best.x[2]),
                std::exp(best.x[3])};
  fit.residual = best.value;
  double mean = 0.0;
  for (double v : data.log_ds) mean += v;
  mean /= static_cast<double>(data.log_ds.size());
  double ss_tot = 0.0;
  for (double v : data.log_ds) ss_tot += (v - mean) * (v - mean);
  // Flat data leaves only rounding noise in ss_tot.
  const bool flat = ss_tot <= 1e-20 * static_cast<double>(data.log_ds.size()) * (1.0 + mean * mean);
  fit.r_squared_log = flat ? 0.0 : 1.0 - best.value / ss_tot;
  for (double v : best.x)
    if (std::abs(v) > kPcpLogBound - 1e-3) fit.at_bound = true;
  // Flat data has no interior optimum to converge to.
  fit.converged = best.converged && !fit.at_bound && !flat && std::isfinite(best.value);
  return fit;
}

}  // namespace primecoh

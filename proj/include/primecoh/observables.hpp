#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "primecoh/csv.hpp"
#include "primecoh/eigenspectrum.hpp"
#include "primecoh/errors.hpp"

namespace primecoh {

/// Log-spaced sample points in t.
struct TimeGrid {
  std::vector<double> points;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  [[nodiscard]] double t_min() const { return points.front(); }
  [[nodiscard]] double t_max() const { return points.back(); }
};

inline TimeGrid log_grid(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw InvalidArgument("log_grid: need 0 < t_min < t_max");
  if (count < 2) throw InvalidArgument("log_grid: need at least two points");
  const double lo = std::log(t_min);
  const double step = (std::log(t_max) - lo) / static_cast<double>(count - 1);
  TimeGrid g;
  g.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    g.points.push_back(std::exp(lo + step * static_cast<double>(i)));
  g.points.front() = t_min;
  g.points.back() = t_max;
  return g;
}

inline TimeGrid default_grid() { return log_grid(1e-4, 1e4, 200); }

struct ProfileRow {
  double t = 0.0;
  double theta = 0.0;
  double ds_exact = 0.0;
  double ds_fd = 0.0;
  double entropy = 0.0;
};

struct ObservableProfile {
  std::vector<ProfileRow> rows;
  OperatorSpec spec;
  Provenance provenance;
  std::size_t n = 0;
};

namespace detail {

/// Neumaier-compensated sum.
template <class F>
double compensated_sum(std::size_t n, F&& term) {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = term(k);
    const double tmp = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - tmp) + x;
    else
      carry += (x - tmp) + sum;
    sum = tmp;
  }
  return sum + carry;
}

/// Gibbs weights shifted by the smallest eigenvalue: w_k = exp(-t(l_k - l_0)).
struct GibbsMoments {
  double shifted_partition = 0.0;  // sum w_k >= 1
  double mean = 0.0;               // <lambda>_t
};

inline GibbsMoments gibbs_moments(std::span<const double> eig, double t) {
  const double base = eig.front();
  const std::size_t n = eig.size();
  const double z = compensated_sum(n, [&](std::size_t k) { return std::exp(-t * (eig[k] - base)); });
  // Mean of the shifted eigenvalues keeps the sum nonnegative term by term.
  const double first = compensated_sum(
      n, [&](std::size_t k) { return (eig[k] - base) * std::exp(-t * (eig[k] - base)); });
  return {z, base + first / z};
}

inline void require_positive_t(double t, const char* who) {
  if (!(t > 0.0)) throw InvalidArgument(std::string(who) + ": t must be > 0");
}

inline void require_nonempty(const SpectralSystem& s, const char* who) {
  if (s.eigenvalues.empty()) throw InvalidArgument(std::string(who) + ": empty spectrum");
}

/// Fornberg's recursion: weights of the first derivative at x0 over `nodes`.
inline std::vector<double> first_derivative_weights(double x0, std::span<const double> nodes) {
  const std::size_t m = nodes.size();
  // c[j][d] for derivative orders d = 0, 1.
  std::vector<std::array<double, 2>> c(m, {0.0, 0.0});
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < m; ++i) {
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = c[j][1];
  return w;
}

}  // namespace detail

/// Theta(t) = sum_k exp(-t lambda_k).
inline double heat_trace(const SpectralSystem& s, double t) {
  detail::require_positive_t(t, "heat_trace");
  detail::require_nonempty(s, "heat_trace");
  const auto m = detail::gibbs_moments(s.eigenvalues, t);
  return std::exp(-t * s.eigenvalues.front()) * m.shifted_partition;
}

/// d_s(t) = 2t <lambda>_t, the closed form of -2 dlog(Theta)/dlog(t).
inline double spectral_dimension_exact(const SpectralSystem& s, double t) {
  detail::require_positive_t(t, "spectral_dimension_exact");
  detail::require_nonempty(s, "spectral_dimension_exact");
  return 2.0 * t * detail::gibbs_moments(s.eigenvalues, t).mean;
}

/// Von Neumann entropy of exp(-tH)/Theta, as log Theta + t <lambda>_t.
inline double gibbs_entropy(const SpectralSystem& s, double t) {
  detail::require_positive_t(t, "gibbs_entropy");
  detail::require_nonempty(s, "gibbs_entropy");
  const auto m = detail::gibbs_moments(s.eigenvalues, t);
  const double entropy = std::log(m.shifted_partition) + t * (m.mean - s.eigenvalues.front());
  return std::max(entropy, 0.0);
}

/// -2 dlog(Theta)/dlog(t) by finite differences of log Theta against log t.
///
/// Interior points use the widest centred stencil that fits, up to nine
/// nodes; the two endpoints use three-node one-sided stencils. Weights come
/// from Fornberg's recursion, so the grid need not be uniform in log t.
inline std::vector<double> spectral_dimension_fd(std::span<const double> t,
                                                 std::span<const double> log_theta) {
  const std::size_t n = t.size();
  if (log_theta.size() != n)
    throw InvalidArgument("spectral_dimension_fd: t and log_theta lengths differ");
  if (n < 3) throw InvalidArgument("spectral_dimension_fd: need at least 3 grid points");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::log(t[i]);
  constexpr std::size_t kMaxHalfWidth = 4;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (i == 0) {
      lo = 0, hi = 2;
    } else if (i == n - 1) {
      lo = n - 3, hi = n - 1;
    } else {
      const std::size_t k = std::min({kMaxHalfWidth, i, n - 1 - i});
      lo = i - k, hi = i + k;
    }
    const std::span<const double> nodes(x.data() + lo, hi - lo + 1);
    const auto w = detail::first_derivative_weights(x[i], nodes);
    double d = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) d += w[j] * log_theta[lo + j];
    out[i] = -2.0 * d;
  }
  return out;
}

inline std::vector<double> spectral_dimension_fd(std::span<const ProfileRow> rows) {
  std::vector<double> t(rows.size()), f(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t[i] = rows[i].t;
    f[i] = std::log(rows[i].theta);
  }
  return spectral_dimension_fd(t, f);
}

/// Theta, exact d_s and entropy at every grid point, with the
/// finite-difference d_s attached as a diagnostic column.
inline ObservableProfile profile(const SpectralSystem& s, const TimeGrid& grid) {
  detail::require_nonempty(s, "profile");
  if (grid.points.empty()) throw InvalidArgument("profile: empty grid");
  ObservableProfile p{{}, s.spec, s.provenance, s.size()};
  p.rows.reserve(grid.size());
  const double base = s.eigenvalues.front();
  // log Theta kept separately: Theta itself can underflow at large t when
  // the spectrum has no zero mode.
  std::vector<double> log_theta;
  log_theta.reserve(grid.size());
  for (double t : grid.points) {
    detail::require_positive_t(t, "profile");
    const auto m = detail::gibbs_moments(s.eigenvalues, t);
    ProfileRow r;
    r.t = t;
    log_theta.push_back(-t * base + std::log(m.shifted_partition));
    r.theta = std::exp(log_theta.back());
    r.ds_exact = 2.0 * t * m.mean;
    r.entropy = std::max(std::log(m.shifted_partition) + t * (m.mean - base), 0.0);
    p.rows.push_back(r);
  }
  if (p.rows.size() >= 3) {
    const auto fd = spectral_dimension_fd(grid.points, log_theta);
    for (std::size_t i = 0; i < fd.size(); ++i) p.rows[i].ds_fd = fd[i];
  }
  return p;
}

/// Profile CSV: header `t,theta,ds_exact,ds_fd,entropy`, 17 significant digits.
inline void write_profile_csv(std::ostream& os, const ObservableProfile& p) {
  os << "t,theta,ds_exact,ds_fd,entropy\n";
  for (const auto& r : p.rows) {
    os << csv::format_double(r.t) << ',' << csv::format_double(r.theta) << ','
       << csv::format_double(r.ds_exact) << ',' << csv::format_double(r.ds_fd) << ','
       << csv::format_double(r.entropy) << '\n';
  }
}

}  // namespace primecoh

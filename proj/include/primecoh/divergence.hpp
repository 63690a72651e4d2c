#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "primecoh/errors.hpp"
#include "primecoh/primes.hpp"

namespace primecoh {

enum class DivergenceKind { LogProduct, LogRatioSquared, Entropic, IndexPower, External };

inline std::string_view to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::LogProduct: return "log-product";
    case DivergenceKind::LogRatioSquared: return "log-ratio-squared";
    case DivergenceKind::Entropic: return "entropic";
    case DivergenceKind::IndexPower: return "index-power";
    case DivergenceKind::External: return "external";
  }
  return "unknown";
}

inline std::optional<DivergenceKind> parse_divergence_kind(std::string_view s) {
  for (auto k : {DivergenceKind::LogProduct, DivergenceKind::LogRatioSquared,
                 DivergenceKind::Entropic, DivergenceKind::IndexPower,
                 DivergenceKind::External}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Selects one of the pairwise dissimilarities.
///
/// `gamma` is read only by IndexPower. `external_values` and `spacing` are
/// read only by External, where delta_ij = ((x_i - x_j) / spacing)^2.
/// `literal_diagonal` is read only by LogProduct: when set, the diagonal
/// keeps log(p_i^2) instead of 0, which makes the kernel exactly rank one.
struct DivergenceModel {
  DivergenceKind kind = DivergenceKind::Entropic;
  double gamma = 1.0;
  std::optional<std::vector<double>> external_values;
  double spacing = 1.0;
  bool literal_diagonal = false;

  static DivergenceModel log_product(bool literal = false) {
    return {DivergenceKind::LogProduct, 1.0, std::nullopt, 1.0, literal};
  }
  static DivergenceModel log_ratio_squared() { return {DivergenceKind::LogRatioSquared, 1.0, std::nullopt}; }
  static DivergenceModel entropic() { return {DivergenceKind::Entropic, 1.0, std::nullopt}; }
  static DivergenceModel index_power(double gamma) {
    return {DivergenceKind::IndexPower, gamma, std::nullopt};
  }
  static DivergenceModel external(std::vector<double> values, double spacing) {
    return {DivergenceKind::External, 1.0, std::move(values), spacing};
  }

  void validate() const {
    if (kind == DivergenceKind::IndexPower && !(gamma > 0.0))
      throw InvalidArgument("divergence model: index-power requires gamma > 0");
    if ((kind == DivergenceKind::External) != external_values.has_value())
      throw InvalidArgument("divergence model: external_values present iff kind is external");
    if (kind == DivergenceKind::External && !(spacing > 0.0))
      throw InvalidArgument("divergence model: external spacing must be > 0");
  }
};

struct DivergenceMatrix {
  Eigen::MatrixXd delta;
  // Only the rank-one log-product variant sets this.
  bool literal_diagonal = false;

  [[nodiscard]] Eigen::Index size() const noexcept { return delta.rows(); }
};

struct KernelMatrix {
  Eigen::MatrixXd k;
  double delta0 = 1.0;

  [[nodiscard]] Eigen::Index size() const noexcept { return k.rows(); }
};

namespace detail {

template <class Entry>
DivergenceMatrix fill_symmetric(Eigen::Index n, Entry&& entry) {
  DivergenceMatrix out{Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = entry(i, j);
      out.delta(i, j) = v;
      out.delta(j, i) = v;
    }
  }
  return out;
}

}  // namespace detail

/// Pairwise divergence over the prime set (or over external values).
inline DivergenceMatrix divergence_matrix(const PrimeSet& primes, const DivergenceModel& model) {
  model.validate();
  if (model.kind == DivergenceKind::External) {
    const auto& x = *model.external_values;
    if (x.empty()) throw InvalidArgument("divergence_matrix: empty external value list");
    const double s = model.spacing;
    return detail::fill_symmetric(static_cast<Eigen::Index>(x.size()),
                                  [&](Eigen::Index i, Eigen::Index j) {
                                    const double d = (x[i] - x[j]) / s;
                                    return d * d;
                                  });
  }
  if (primes.size() == 0) throw InvalidArgument("divergence_matrix: empty prime set");

  const auto n = static_cast<Eigen::Index>(primes.size());
  std::vector<double> logp(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i)
    logp[i] = std::log(static_cast<double>(primes[i]));

  switch (model.kind) {
    case DivergenceKind::LogProduct: {
      auto out = detail::fill_symmetric(
          n, [&](Eigen::Index i, Eigen::Index j) { return logp[i] + logp[j]; });
      if (model.literal_diagonal) {
        for (Eigen::Index i = 0; i < n; ++i) out.delta(i, i) = 2.0 * logp[i];
        out.literal_diagonal = true;
      }
      return out;
    }
    case DivergenceKind::LogRatioSquared:
      return detail::fill_symmetric(n, [&](Eigen::Index i, Eigen::Index j) {
        const double d = logp[i] - logp[j];
        return d * d;
      });
    case DivergenceKind::Entropic:
      return detail::fill_symmetric(n, [&](Eigen::Index i, Eigen::Index j) {
        // (a+b)/(2 sqrt(ab)) - 1 = (sqrt a - sqrt b)^2 / (2 sqrt(ab)), kept
        // in log1p form so close primes don't cancel.
        const double ra = std::sqrt(static_cast<double>(primes[i]));
        const double rb = std::sqrt(static_cast<double>(primes[j]));
        const double gap = ra - rb;
        return std::log1p(gap * gap / (2.0 * ra * rb));
      });
    case DivergenceKind::IndexPower:
      // 1-based indices: log(i+1) for zero-based i.
      return detail::fill_symmetric(n, [&](Eigen::Index i, Eigen::Index j) {
        const double d = std::abs(std::log(static_cast<double>(i + 1)) -
                                  std::log(static_cast<double>(j + 1)));
        return std::pow(d, model.gamma);
      });
    case DivergenceKind::External:
      break;
  }
  throw InvalidArgument("divergence_matrix: unknown model");
}

/// K_ij = exp(-delta_ij / delta0). Entries can underflow to exactly 0 for
/// divergences beyond ~745 delta0.
inline KernelMatrix coherence_kernel(const DivergenceMatrix& delta, double delta0) {
  if (!(delta0 > 0.0)) throw InvalidArgument("coherence_kernel: delta0 must be > 0");
  return KernelMatrix{(-delta.delta.array() / delta0).exp().matrix(), delta0};
}

}  // namespace primecoh

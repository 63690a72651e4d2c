#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "primecoh/errors.hpp"
#include "primecoh/operators.hpp"

namespace primecoh {

/// Ascending eigenvalues of one Hamiltonian plus how it was built.
struct SpectralSystem {
  std::vector<double> eigenvalues;
  OperatorSpec spec;
  Provenance provenance;

  [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
};

inline constexpr double kPsdSlack = 1e-9;
inline constexpr double kSymmetryTolerance = 1e-10;

namespace detail {

inline std::string describe(const Provenance& p) {
  std::string s = "model=" + p.model + " delta0=" + std::to_string(p.delta0);
  if (p.gamma) s += " gamma=" + std::to_string(*p.gamma);
  if (p.seed) s += " seed=" + std::to_string(*p.seed);
  return s;
}

}  // namespace detail

/// Dense symmetric eigendecomposition. Five eigenpairs spread across the
/// spectrum are residual-checked; eigenvectors are discarded afterwards.
/// Eigenvalues in [-1e-9, 0) are clamped to zero.
inline SpectralSystem symmetric_eigenvalues(const Eigen::MatrixXd& m, const OperatorSpec& spec,
                                            const Provenance& prov = {}) {
  if (m.rows() != m.cols())
    throw InvalidArgument("symmetric_eigenvalues: matrix is not square");
  const auto n = m.rows();
  if (n == 0) return {{}, spec, prov};

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw InvalidArgument("symmetric_eigenvalues: matrix is not symmetric (" +
                          detail::describe(prov) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("symmetric_eigenvalues: eigensolver did not converge (" +
                           detail::describe(prov) + ")");

  const Eigen::VectorXd& values = solver.eigenvalues();
  const double norm = std::max(std::abs(values(0)), std::abs(values(n - 1)));
  const std::array<Eigen::Index, 5> probes{0, n / 4, n / 2, (3 * n) / 4, n - 1};
  for (auto k : probes) {
    const auto v = solver.eigenvectors().col(k);
    const double residual = (m * v - values(k) * v).norm();
    if (residual > 1e-8 * std::max(norm, 1e-300))
      throw NumericalFailure("symmetric_eigenvalues: residual " + std::to_string(residual) +
                             " too large at k=" + std::to_string(k) + " (" +
                             detail::describe(prov) + ")");
  }

  std::vector<double> out(values.data(), values.data() + n);
  for (double& x : out) {
    if (x < -kPsdSlack)
      throw NumericalFailure("symmetric_eigenvalues: eigenvalue " + std::to_string(x) +
                             " below PSD slack (" + detail::describe(prov) + ")");
    if (x < 0.0) x = 0.0;
  }
  // Eigen already sorts ascending; clamping cannot reorder.
  return {std::move(out), spec, prov};
}

inline SpectralSystem symmetric_eigenvalues(const OperatorMatrix& op) {
  return symmetric_eigenvalues(op.h, op.spec, op.provenance);
}

/// N(lambda) = #{k : lambda_k <= lambda}.
inline std::size_t counting_function(const SpectralSystem& s, double lambda) {
  return static_cast<std::size_t>(
      std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), lambda) -
      s.eigenvalues.begin());
}

}  // namespace primecoh

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "primecoh/divergence.hpp"
#include "primecoh/errors.hpp"

namespace primecoh {

enum class Normalization { SymmetricNormalized, Combinatorial };
enum class Order { Two, Four };

inline std::string_view to_string(Normalization n) {
  return n == Normalization::SymmetricNormalized ? "symmetric-normalized" : "combinatorial";
}
inline std::string_view to_string(Order o) { return o == Order::Two ? "two" : "four"; }

struct OperatorSpec {
  Normalization normalization = Normalization::SymmetricNormalized;
  Order order = Order::Four;
};

/// Where an operator came from; copied onto every derived object.
struct Provenance {
  std::string model;
  double delta0 = 1.0;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
};

struct OperatorMatrix {
  Eigen::MatrixXd h;
  OperatorSpec spec;
  double trace = 0.0;
  Provenance provenance;

  [[nodiscard]] Eigen::Index size() const noexcept { return h.rows(); }
};

/// Row sums d_i = sum_j K_ij.
inline Eigen::VectorXd degree_vector(const KernelMatrix& kernel) {
  return kernel.k.rowwise().sum();
}

/// S = D^{-1/2} K D^{-1/2}.
inline Eigen::MatrixXd normalized_affinity(const KernelMatrix& kernel) {
  const Eigen::VectorXd inv_sqrt = degree_vector(kernel).array().rsqrt();
  Eigen::MatrixXd s = inv_sqrt.asDiagonal() * kernel.k * inv_sqrt.asDiagonal();
  return (s + s.transpose()) * 0.5;
}

/// L = I - S, order two.
inline OperatorMatrix normalized_generator(const KernelMatrix& kernel, Provenance prov = {}) {
  const auto n = kernel.size();
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n) - normalized_affinity(kernel);
  const double tr = l.trace();
  return {std::move(l), {Normalization::SymmetricNormalized, Order::Two}, tr, std::move(prov)};
}

/// L_c = D - K, order two. Unbounded as n grows.
inline OperatorMatrix combinatorial_laplacian(const KernelMatrix& kernel, Provenance prov = {}) {
  Eigen::MatrixXd l = -kernel.k;
  l.diagonal() += degree_vector(kernel);
  const double tr = l.trace();
  return {std::move(l), {Normalization::Combinatorial, Order::Two}, tr, std::move(prov)};
}

/// Order two passes the generator through; order four squares it.
inline OperatorMatrix hamiltonian(const OperatorMatrix& generator, Order order) {
  if (generator.spec.order != Order::Two)
    throw InvalidArgument("hamiltonian: generator must be order two");
  if (order == Order::Two) return generator;
  Eigen::MatrixXd sq = generator.h * generator.h;
  Eigen::MatrixXd h = (sq + sq.transpose()) * 0.5;
  const double tr = h.trace();
  return {std::move(h), {generator.spec.normalization, Order::Four}, tr, generator.provenance};
}

inline OperatorMatrix build_operator(const KernelMatrix& kernel, const OperatorSpec& spec,
                                     Provenance prov = {}) {
  auto gen = spec.normalization == Normalization::SymmetricNormalized
                 ? normalized_generator(kernel, std::move(prov))
                 : combinatorial_laplacian(kernel, std::move(prov));
  return hamiltonian(gen, spec.order);
}

}  // namespace primecoh

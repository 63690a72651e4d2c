#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "primecoh/errors.hpp"

namespace primecoh {

/// The first n primes in ascending order.
struct PrimeSet {
  std::vector<std::uint64_t> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] std::uint64_t operator[](std::size_t i) const { return values[i]; }
};

namespace detail {

// Rosser's bound p_n < n(ln n + ln ln n) holds for n >= 6.
inline std::uint64_t nth_prime_upper_bound(std::size_t n) {
  if (n < 6) return 13;
  const double x = static_cast<double>(n);
  return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x)))) + 1;
}

inline std::vector<std::uint64_t> sieve_up_to(std::uint64_t limit, std::size_t want) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  out.reserve(want);
  for (std::uint64_t i = 2; i <= limit && out.size() < want; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace detail

/// Sieve of Eratosthenes sized by Rosser's upper bound; doubles the limit on
/// shortfall.
inline PrimeSet first_n_primes(std::size_t n) {
  if (n == 0) throw InvalidArgument("first_n_primes: n must be >= 1");
  auto limit = detail::nth_prime_upper_bound(n);
  for (;;) {
    auto found = detail::sieve_up_to(limit, n);
    if (found.size() >= n) {
      found.resize(n);
      return PrimeSet{std::move(found)};
    }
    limit *= 2;
  }
}

}  // namespace primecoh

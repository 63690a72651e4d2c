#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace primecoh {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double diameter_tolerance = 1e-10;
  std::size_t max_iterations = 2000;
};

template <std::size_t D>
struct NelderMeadResult {
  std::array<double, D> x{};
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // simplex diameter fell below tolerance
};

/// Derivative-free simplex minimisation (reflection, expansion, inside and
/// outside contraction, shrink) with the standard coefficients 1, 2, 1/2, 1/2.
/// Deterministic: no randomness, ties broken by vertex order.
template <std::size_t D, class F>
NelderMeadResult<D> nelder_mead(F&& f, const std::array<double, D>& start,
                                const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, D>;
  std::array<Point, D + 1> simplex;
  std::array<double, D + 1> value;
  simplex[0] = start;
  for (std::size_t i = 0; i < D; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += opt.initial_step;
  }
  for (std::size_t i = 0; i <= D; ++i) value[i] = f(simplex[i]);

  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= D; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < D; ++k) {
        const double e = simplex[i][k] - simplex[0][k];
        s += e * e;
      }
      d = std::max(d, std::sqrt(s));
    }
    return d;
  };
  auto along = [](const Point& from, const Point& to, double c) {
    Point p;
    for (std::size_t k = 0; k < D; ++k) p[k] = from[k] + c * (to[k] - from[k]);
    return p;
  };

  std::array<std::size_t, D + 1> order;
  NelderMeadResult<D> res;
  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    {
      auto s2 = simplex;
      auto v2 = value;
      for (std::size_t i = 0; i <= D; ++i) simplex[i] = s2[order[i]], value[i] = v2[order[i]];
    }
    if (diameter() < opt.diameter_tolerance) {
      res.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t k = 0; k < D; ++k) centroid[k] += simplex[i][k] / static_cast<double>(D);

    const Point& worst = simplex[D];
    const Point reflected = along(centroid, worst, -1.0);
    const double fr = f(reflected);
    if (fr < value[0]) {
      const Point expanded = along(centroid, worst, -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[D] = expanded, value[D] = fe;
      } else {
        simplex[D] = reflected, value[D] = fr;
      }
      continue;
    }
    if (fr < value[D - 1]) {
      simplex[D] = reflected, value[D] = fr;
      continue;
    }
    if (fr < value[D]) {
      const Point outside = along(centroid, worst, -0.5);
      const double fo = f(outside);
      if (fo <= fr) {
        simplex[D] = outside, value[D] = fo;
        continue;
      }
    } else {
      const Point inside = along(centroid, worst, 0.5);
      const double fi = f(inside);
      if (fi < value[D]) {
        simplex[D] = inside, value[D] = fi;
        continue;
      }
    }
    for (std::size_t i = 1; i <= D; ++i) {
      simplex[i] = along(simplex[0], simplex[i], 0.5);
      value[i] = f(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(value.begin(), value.end()) - value.begin());
  res.x = simplex[best];
  res.value = value[best];
  return res;
}

}  // namespace primecoh

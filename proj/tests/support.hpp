#pragma once

#include <cmath>
#include <cstdint>

#include "lsqbounds/distributions.hpp"
#include "lsqbounds/linalg.hpp"
#include "lsqbounds/rng.hpp"

namespace lsqb::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  Matrix a(rows, cols);
  for (double& v : a.data()) v = normal_sample(rng);
  return a;
}

inline Matrix random_uniform_matrix(std::size_t rows, std::size_t cols, RngStream& rng, double lo, double hi) {
  Matrix a(rows, cols);
  for (double& v : a.data()) v = lo + (hi - lo) * rng.uniform();
  return a;
}

/// R^T R + I, always SPD.
inline Matrix random_spd(std::size_t n, RngStream& rng) {
  const Matrix r = random_matrix(n, n, rng);
  return r.transpose() * r + Matrix::identity(n);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace lsqb::testing

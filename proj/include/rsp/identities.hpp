#pragma once

// Numerical residuals of the structural identities of (P_k, Q_k) on the circle.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rsp/core.hpp"
#include "rsp/eval.hpp"

namespace rsp {

/// max over a half-offset full-circle grid of ||P|^2 + |Q|^2 - 2n| / (2n).
inline double parallelogram_residual(const RudinShapiroPair& pair, std::size_t num_samples) {
  if (num_samples < 1) throw ContractError("num_samples must be at least 1");
  const double two_n = 2.0 * static_cast<double>(pair.n);
  // A single sample still needs a valid grid spec.
  GridSpec grid{Arc::full(), num_samples, true};
  auto dev = sample_grid(grid, [&](long double u) {
    PairValue v = detail::eval_pair_turn(pair.k, u);
    return std::abs(std::norm(v.p) + std::norm(v.q) - two_n) / two_n;
  });
  return *std::max_element(dev.begin(), dev.end());
}

struct ConjugateResidual {
  /// Largest integer coefficient mismatch of Q_k(z) = (-1)^{k+1} z^{n-1} P_k(-1/z); 0 when it holds.
  double coefficient_mismatch;
  /// max over the grid of ||Q_k(z)| - |P_k(-z)||.
  double modulus_residual;
};

inline ConjugateResidual conjugate_relation_residual(const RudinShapiroPair& pair, std::size_t num_samples) {
  if (num_samples < 1) throw ContractError("num_samples must be at least 1");
  GridSpec grid{Arc::full(), num_samples, true};
  auto dev = sample_grid(grid, [&](long double u) {
    PairValue at = detail::eval_pair_turn(pair.k, u);
    PairValue opposite = detail::eval_pair_turn(pair.k, u + 0.5L);
    return std::abs(std::abs(at.q) - std::abs(opposite.p));
  });
  return {static_cast<double>(conjugate_coefficient_mismatch(pair)), *std::max_element(dev.begin(), dev.end())};
}

}  // namespace rsp

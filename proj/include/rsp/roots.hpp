#pragma once

// All complex roots of a real polynomial by Aberth-Ehrlich simultaneous
// iteration (Jacobi sweeps, no deflation), plus the Jensen-formula Mahler
// measure and zero censuses built on the resulting root sets.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rsp/core.hpp"
#include "rsp/error.hpp"
#include "rsp/parallel.hpp"

namespace rsp {

using Complex = std::complex<double>;

struct RootOptions {
  double tol = 1e-12;
  std::size_t max_iter = 1000;
  std::uint64_t seed = 20231;
  std::size_t max_degree = std::size_t{1} << 14;
};

struct RootSet {
  std::vector<Complex> roots;
  /// |S(z)/S'(z)| / max(1, |z|) at each root.
  std::vector<double> residuals;
  std::vector<char> flagged;
  double tolerance = 0.0;
  std::size_t degree = 0;
  double leading_coefficient = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  std::size_t flagged_count() const { return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1)); }
};

namespace detail {

struct NewtonTerm {
  Complex ratio;       // S(z) / S'(z)
  double value_abs;    // |S(z)| (or |z^{-d} S(z)| outside the unit disk)
  double error_bound;  // rounding scale of value_abs
};

// Outside the unit disk the reversed polynomial is evaluated at 1/z:
//   S(z) = z^d R(1/z),  S/S' = z R / (d R - y R'),  y = 1/z.
inline NewtonTerm newton_term(std::span<const double> a, Complex z) {
  const std::size_t d = a.size() - 1;
  Complex v{0.0, 0.0}, dv{0.0, 0.0};
  double bound = 0.0;
  if (std::abs(z) <= 1.0) {
    const double r = std::abs(z);
    for (std::size_t j = d + 1; j-- > 0;) {
      dv = dv * z + v;
      v = v * z + a[j];
      bound = bound * r + std::abs(a[j]);
    }
    return {v / dv, std::abs(v), bound};
  }
  const Complex y = 1.0 / z;
  const double r = std::abs(y);
  for (std::size_t i = 0; i <= d; ++i) {  // coefficient of y^{d-i} in R is a[i]
    dv = dv * y + v;
    v = v * y + a[i];
    bound = bound * r + std::abs(a[i]);
  }
  return {z * v / (static_cast<double>(d) * v - y * dv), std::abs(v), bound};
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Roots of sum_j coeffs[j] z^j (real coefficients, nonzero leading term).
inline RootSet find_roots(std::span<const double> coeffs, const RootOptions& opt = {}) {
  if (coeffs.size() < 2) throw ContractError("find_roots needs degree >= 1");
  const std::size_t d = coeffs.size() - 1;
  if (d > opt.max_degree) detail::limit_exceeded("root-finder degree", d, opt.max_degree);
  if (coeffs[d] == 0.0) throw ContractError("leading coefficient is zero");

  std::mt19937_64 rng(opt.seed);
  const double radius = 1.0 + 1.0 / static_cast<double>(d);
  const double offset = detail::uniform01(rng);
  std::vector<Complex> z(d);
  for (std::size_t i = 0; i < d; ++i) {
    double phase = 2.0 * std::numbers::pi * (static_cast<double>(i) + offset + 0.4 * detail::uniform01(rng)) /
                   static_cast<double>(d);
    z[i] = std::polar(radius, phase);
  }

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  std::vector<char> done(d, 0);
  std::vector<Complex> step(d);
  std::vector<char> settled(d, 0);
  std::size_t iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    if (std::all_of(done.begin(), done.end(), [](char c) { return c != 0; })) break;
    parallel_for(d, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        step[i] = 0.0;
        if (done[i]) continue;
        auto t = detail::newton_term(coeffs, z[i]);
        if (t.value_abs <= 8.0 * kEps * t.error_bound) {  // at rounding level
          settled[i] = 1;
          continue;
        }
        Complex sum{0.0, 0.0};
        for (std::size_t j = 0; j < d; ++j)
          if (j != i) sum += 1.0 / (z[i] - z[j]);
        step[i] = t.ratio / (1.0 - t.ratio * sum);
      }
    });
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      if (settled[i]) {
        done[i] = 1;
        continue;
      }
      z[i] -= step[i];
      if (std::abs(step[i]) <= opt.tol * std::max(1.0, std::abs(z[i]))) done[i] = 1;
    }
  }

  RootSet out;
  out.roots = std::move(z);
  out.residuals.resize(d);
  out.flagged.assign(d, 0);
  out.tolerance = opt.tol;
  out.degree = d;
  out.leading_coefficient = coeffs[d];
  out.seed = opt.seed;
  out.iterations = iter;
  for (std::size_t i = 0; i < d; ++i) {
    auto t = detail::newton_term(coeffs, out.roots[i]);
    double res = std::abs(t.ratio) / std::max(1.0, std::abs(out.roots[i]));
    if (!std::isfinite(res)) res = t.value_abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    out.residuals[i] = res;
    if (!(res <= opt.tol)) out.flagged[i] = 1;
  }
  return out;
}

inline RootSet find_roots(const LittlewoodPolynomial& poly, const RootOptions& opt = {}) {
  auto c = poly.as_doubles();
  return find_roots(std::span<const double>(c), opt);
}

/// |c| * prod max(1, |z_k|), accumulated in log space.
inline double jensen_mahler(const RootSet& roots, double leading_coefficient_magnitude) {
  if (std::size_t bad = roots.flagged_count(); bad > 0)
    throw ContractError("jensen_mahler: " + std::to_string(bad) + " flagged roots in the root set");
  if (!(leading_coefficient_magnitude > 0.0)) throw ContractError("leading coefficient magnitude must be positive");
  double log_sum = std::log(leading_coefficient_magnitude);
  for (const Complex& r : roots.roots) log_sum += std::max(0.0, std::log(std::abs(r)));
  return std::exp(log_sum);
}

inline double jensen_mahler(const RootSet& roots) { return jensen_mahler(roots, std::abs(roots.leading_coefficient)); }

/// Largest distance from a root to the nearest conjugate of another (or the same) root.
inline double conjugate_closure_error(const RootSet& roots) {
  double worst = 0.0;
  for (const Complex& r : roots.roots) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& s : roots.roots) best = std::min(best, std::abs(std::conj(r) - s));
    worst = std::max(worst, best);
  }
  return worst;
}

struct ZeroCensus {
  std::size_t inside_open_disk = 0;
  std::size_t on_circle_within_eps = 0;
  std::size_t outside = 0;
  std::size_t real_zeros = 0;
  double eps = 0.0;
  /// Smallest ||z| - 1| over all roots.
  double min_circle_distance = std::numeric_limits<double>::infinity();
};

inline ZeroCensus zero_census(const RootSet& roots, double eps) {
  if (!(eps > 0.0)) throw ContractError("census eps must be positive");
  ZeroCensus c;
  c.eps = eps;
  for (const Complex& r : roots.roots) {
    const double m = std::abs(r);
    c.min_circle_distance = std::min(c.min_circle_distance, std::abs(m - 1.0));
    if (std::abs(m - 1.0) <= eps) ++c.on_circle_within_eps;
    else if (m < 1.0) ++c.inside_open_disk;
    else ++c.outside;
    if (std::abs(r.imag()) <= eps) ++c.real_zeros;
  }
  return c;
}

}  // namespace rsp

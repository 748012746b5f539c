#pragma once

// Exact count of distinct real roots via a Sturm sequence over the integers.
//
// The sequence is S_0 = S, S_1 = S', S_{i+1} = -c_i rem(S_{i-1}, S_i) with
// c_i > 0. Pseudo-remainders are taken against the divisor normalised to a
// positive leading coefficient, so they are positive multiples of the true
// remainder, and the subresultant divisors |beta_i| (magnitudes only) keep the
// coefficients from growing beyond subresultant size. Each member equals a
// subresultant up to sign, so every division is exact.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "rsp/core.hpp"
#include "rsp/error.hpp"

namespace rsp {

inline constexpr std::size_t kSturmMaxDegree = 1024;

namespace detail {

using BigPoly = std::vector<mpz_class>;  // index = power, no trailing zeros

inline void trim(BigPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline std::ptrdiff_t big_degree(const BigPoly& p) { return static_cast<std::ptrdiff_t>(p.size()) - 1; }

inline BigPoly derivative(const BigPoly& p) {
  BigPoly d;
  for (std::size_t j = 1; j < p.size(); ++j) d.push_back(p[j] * static_cast<unsigned long>(j));
  trim(d);
  return d;
}

// lc(b)^{deg a - deg b + 1} a mod b, with lc(b) > 0 required.
inline BigPoly pseudo_remainder(BigPoly a, const BigPoly& b) {
  const std::size_t db = b.size() - 1;
  const mpz_class& lead = b.back();
  std::ptrdiff_t steps = big_degree(a) - big_degree(b) + 1;
  mpz_class t;
  for (; steps > 0; --steps) {
    if (a.empty() || a.size() - 1 < db) {
      // Degree already dropped: the remaining multiplications by lc(b) are pure scaling.
      for (auto& c : a) c *= lead;
      continue;
    }
    const std::size_t shift = a.size() - 1 - db;
    mpz_class top = a.back();
    for (auto& c : a) c *= lead;
    for (std::size_t j = 0; j <= db; ++j) {
      t = top * b[j];
      a[shift + j] -= t;
    }
    trim(a);
  }
  return a;
}

inline int sign(const mpz_class& v) { return sgn(v); }

}  // namespace detail

/// Number of distinct real roots of sum_j coeffs[j] x^j. Exact.
template <class Int>
std::size_t real_root_count_exact(std::span<const Int> coeffs, std::size_t max_degree = kSturmMaxDegree) {
  using detail::BigPoly;
  BigPoly s0;
  for (Int c : coeffs) s0.emplace_back(static_cast<long>(c));
  detail::trim(s0);
  if (s0.empty()) throw ContractError("zero polynomial has no finite root count");
  const std::size_t deg = s0.size() - 1;
  if (deg > max_degree)
    throw ResourceLimitError("exact real-root count supports degree <= " + std::to_string(max_degree) + ", got " +
                             std::to_string(deg) + "; use the numeric zero census instead");
  if (deg == 0) return 0;

  std::vector<std::pair<std::ptrdiff_t, int>> chain;  // (degree, sign of leading coefficient)
  chain.emplace_back(detail::big_degree(s0), detail::sign(s0.back()));
  BigPoly s1 = detail::derivative(s0);
  chain.emplace_back(detail::big_degree(s1), detail::sign(s1.back()));

  // |psi| and the previous leading coefficient magnitude for the subresultant divisor.
  mpz_class psi = 1;
  mpz_class prev_lead_abs;
  std::ptrdiff_t prev_delta = 0;
  bool first = true;
  while (true) {
    const std::ptrdiff_t delta = detail::big_degree(s0) - detail::big_degree(s1);
    mpz_class beta;
    if (first) {
      beta = 1;
    } else {
      // psi_i = |g_{i-1}|^{d_{i-1}} / psi_{i-1}^{d_{i-1}-1},  beta_i = |g_{i-1}| psi_i^{d_i}
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), prev_lead_abs.get_mpz_t(), static_cast<unsigned long>(prev_delta));
      mpz_pow_ui(den.get_mpz_t(), psi.get_mpz_t(), static_cast<unsigned long>(prev_delta - 1));
      mpz_divexact(psi.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), psi.get_mpz_t(), static_cast<unsigned long>(delta));
      beta = prev_lead_abs * pw;
    }

    BigPoly divisor = s1;
    if (divisor.back() < 0)
      for (auto& c : divisor) c = -c;
    BigPoly r = detail::pseudo_remainder(s0, divisor);
    if (r.empty()) break;
    for (auto& c : r) {
      if (!mpz_divisible_p(c.get_mpz_t(), beta.get_mpz_t()))
        throw std::logic_error("Sturm chain: subresultant division is not exact");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), beta.get_mpz_t());
      c = -c;
    }
    prev_lead_abs = abs(s1.back());
    prev_delta = delta;
    first = false;
    s0 = std::move(s1);
    s1 = std::move(r);
    chain.emplace_back(detail::big_degree(s1), detail::sign(s1.back()));
  }

  auto variations = [&](bool at_minus_infinity) {
    std::size_t v = 0;
    int last = 0;
    for (auto [d, s] : chain) {
      int sg = (at_minus_infinity && (d % 2 != 0)) ? -s : s;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  };
  return variations(true) - variations(false);
}

inline std::size_t real_zero_count_exact(const LittlewoodPolynomial& poly, std::size_t max_degree = kSturmMaxDegree) {
  return real_root_count_exact(poly.coeffs(), max_degree);
}

}  // namespace rsp

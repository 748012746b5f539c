#pragma once

// Polynomials over F_2 and the zero-freeness certificate for skew-reciprocal
// polynomials with odd coefficients.
//
// For S(z) = sum_{j=0}^{2m} a_j z^j with a_{m-j} = (-1)^j a_{m+j}:
//   z^{-m} S(z) = A(z) + B(z),
//   A(z) = a_m + sum_{j>=1} a_{m+2j}   (z^{2j}   + z^{-2j})        real on |z| = 1
//   B(z) =       sum_{j>=1} a_{m+2j-1} (z^{2j-1} - z^{-(2j-1)})    imaginary on |z| = 1
// A zero of S on the circle is a common zero of A and B, hence of z^m A and
// z^m B. Both have odd leading coefficients, so a common factor over Z would
// survive reduction mod 2; gcd(z^m A, z^m B) = 1 over F_2 rules it out.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsp/error.hpp"

namespace rsp {

/// Bit-packed polynomial over F_2; bit j is the coefficient of z^j.
class GF2Poly {
 public:
  GF2Poly() = default;

  static GF2Poly monomial(std::size_t power) {
    GF2Poly p;
    p.set(power);
    return p;
  }
  /// From exponents; repeated exponents cancel.
  static GF2Poly from_exponents(std::initializer_list<std::size_t> exps) {
    GF2Poly p;
    for (auto e : exps) p.flip(e);
    return p;
  }
  static GF2Poly one() { return monomial(0); }

  bool is_zero() const noexcept { return words_.empty(); }
  bool is_one() const noexcept { return words_.size() == 1 && words_[0] == 1; }

  /// Index of the highest set bit, -1 for the zero polynomial.
  std::ptrdiff_t degree() const noexcept {
    if (words_.empty()) return -1;
    return static_cast<std::ptrdiff_t>(64 * (words_.size() - 1) + (63 - std::countl_zero(words_.back())));
  }

  bool bit(std::size_t j) const noexcept {
    std::size_t w = j / 64;
    return w < words_.size() && ((words_[w] >> (j % 64)) & 1u) != 0;
  }

  void flip(std::size_t j) {
    std::size_t w = j / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] ^= std::uint64_t{1} << (j % 64);
    normalize();
  }
  void set(std::size_t j) {
    if (!bit(j)) flip(j);
  }

  GF2Poly& operator^=(const GF2Poly& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
    normalize();
    return *this;
  }
  friend GF2Poly operator^(GF2Poly a, const GF2Poly& b) { return a ^= b; }
  friend GF2Poly operator+(GF2Poly a, const GF2Poly& b) { return a ^= b; }

  GF2Poly shifted(std::size_t s) const {
    if (is_zero()) return {};
    GF2Poly r;
    const std::size_t ws = s / 64, bs = s % 64;
    r.words_.assign(words_.size() + ws + 1, 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      r.words_[i + ws] ^= words_[i] << bs;
      if (bs != 0) r.words_[i + ws + 1] ^= words_[i] >> (64 - bs);
    }
    r.normalize();
    return r;
  }

  /// Carry-less product.
  friend GF2Poly operator*(const GF2Poly& a, const GF2Poly& b) {
    GF2Poly r;
    for (std::ptrdiff_t j = 0; j <= b.degree(); ++j)
      if (b.bit(static_cast<std::size_t>(j))) r ^= a.shifted(static_cast<std::size_t>(j));
    return r;
  }

  /// Quotient and remainder of carry-less division.
  std::pair<GF2Poly, GF2Poly> divmod(const GF2Poly& divisor) const {
    if (divisor.is_zero()) throw ContractError("GF(2) division by zero polynomial");
    GF2Poly q, r = *this;
    const std::ptrdiff_t dd = divisor.degree();
    while (r.degree() >= dd) {
      const auto s = static_cast<std::size_t>(r.degree() - dd);
      q.flip(s);
      r ^= divisor.shifted(s);
    }
    return {std::move(q), std::move(r)};
  }
  GF2Poly operator%(const GF2Poly& divisor) const { return divmod(divisor).second; }

  /// Hex digits of the bit vector, most significant nibble first ("0" for zero).
  std::string to_hex() const {
    if (is_zero()) return "0";
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    for (std::ptrdiff_t nib = degree() / 4; nib >= 0; --nib) {
      const auto n = static_cast<std::size_t>(nib);
      s.push_back(kDigits[(words_[n / 16] >> (4 * (n % 16))) & 0xFu]);
    }
    return s;
  }

  friend bool operator==(const GF2Poly&, const GF2Poly&) = default;

 private:
  void normalize() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }
  std::vector<std::uint64_t> words_;
};

/// Monic gcd over F_2 by the Euclidean algorithm; gcd(a, 0) = a.
inline GF2Poly gf2_gcd(GF2Poly a, GF2Poly b) {
  if (a.is_zero() && b.is_zero()) throw ContractError("gcd of two zero polynomials is undefined");
  while (!b.is_zero()) {
    GF2Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

enum class CoefficientMode {
  Littlewood,  // every coefficient is +1 or -1
  AllOdd,      // every coefficient is an odd integer
};

struct SkewReciprocity {
  bool skew_reciprocal = false;
  std::size_t m = 0;
  std::string reason;  // empty when skew_reciprocal
};

/// Checks a_{m-j} = (-1)^j a_{m+j} for j = 1..m on exact integers.
inline SkewReciprocity is_skew_reciprocal(std::span<const long long> a,
                                          CoefficientMode mode = CoefficientMode::Littlewood) {
  SkewReciprocity r;
  if (a.empty()) {
    r.reason = "empty coefficient list";
    return r;
  }
  if (a.back() == 0) {
    r.reason = "leading coefficient is zero";
    return r;
  }
  for (std::size_t j = 0; j < a.size(); ++j) {
    const long long c = a[j];
    if (mode == CoefficientMode::Littlewood && c != 1 && c != -1) {
      r.reason = "coefficient " + std::to_string(j) + " is not +1 or -1";
      return r;
    }
    if (mode == CoefficientMode::AllOdd && c % 2 == 0) {
      r.reason = "coefficient " + std::to_string(j) + " is even";
      return r;
    }
  }
  if (a.size() % 2 == 0) {
    r.reason = "odd degree";
    return r;
  }
  const std::size_t m = (a.size() - 1) / 2;
  r.m = m;
  for (std::size_t j = 1; j <= m; ++j) {
    const long long rhs = (j % 2 == 0) ? a[m + j] : -a[m + j];
    if (a[m - j] != rhs) {
      r.reason = "a_" + std::to_string(m - j) + " != (-1)^" + std::to_string(j) + " a_" + std::to_string(m + j);
      return r;
    }
  }
  r.skew_reciprocal = true;
  return r;
}

struct ABParts {
  GF2Poly a_tilde;  // z^m A(z) mod 2
  GF2Poly b_tilde;  // z^m B(z) mod 2
  std::size_t m = 0;
};

/// Reductions mod 2 of z^m A(z) and z^m B(z); any parity of m.
inline ABParts build_ab_parts(std::span<const long long> a, CoefficientMode mode = CoefficientMode::Littlewood) {
  const auto check = is_skew_reciprocal(a, mode);
  if (!check.skew_reciprocal) throw ContractError("build_ab_parts: input is not skew-reciprocal (" + check.reason + ")");
  const std::size_t m = check.m;
  auto odd = [](long long c) { return (c % 2) != 0; };
  ABParts out;
  out.m = m;
  if (odd(a[m])) out.a_tilde.flip(m);
  for (std::size_t j = 1; 2 * j <= m; ++j)  // a_{m+2j} (z^{m+2j} + z^{m-2j})
    if (odd(a[m + 2 * j])) {
      out.a_tilde.flip(m + 2 * j);
      out.a_tilde.flip(m - 2 * j);
    }
  for (std::size_t j = 1; 2 * j - 1 <= m; ++j)  // a_{m+2j-1} (z^{m+2j-1} - z^{m-2j+1})
    if (odd(a[m + 2 * j - 1])) {
      out.b_tilde.flip(m + 2 * j - 1);
      out.b_tilde.flip(m - 2 * j + 1);
    }
  return out;
}

struct MercerCertificate {
  std::size_t input_degree = 0;
  bool is_skew_reciprocal = false;
  std::size_t m = 0;
  std::string parity_case;  // "even-m", "odd-m", or "n/a"
  GF2Poly gcd;
  bool certified_zero_free_on_circle = false;
  std::string reason;
};

/// Classifies the input and, when applicable, certifies it has no zeros on |z| = 1.
inline MercerCertificate mercer_certificate(std::span<const long long> a,
                                            CoefficientMode mode = CoefficientMode::Littlewood) {
  MercerCertificate c;
  c.input_degree = a.empty() ? 0 : a.size() - 1;
  c.parity_case = "n/a";
  const auto check = is_skew_reciprocal(a, mode);
  if (!check.skew_reciprocal) {
    c.reason = "inapplicable: " + check.reason;
    return c;
  }
  c.is_skew_reciprocal = true;
  c.m = check.m;
  c.parity_case = (c.m % 2 == 0) ? "even-m" : "odd-m";
  const ABParts parts = build_ab_parts(a, mode);
  c.gcd = gf2_gcd(parts.a_tilde, parts.b_tilde);
  c.certified_zero_free_on_circle = c.gcd.is_one();
  c.reason = c.certified_zero_free_on_circle ? "gcd over F_2 is 1" : "gcd over F_2 is not 1";
  return c;
}

/// Smallest |S(e^{it})| over `points` equally spaced angles (64 per degree by
/// default). A numerical falsifier for the certificate, not a proof.
inline double circle_min_modulus(std::span<const long long> a, std::size_t points = 0) {
  if (a.empty()) throw ContractError("empty coefficient list");
  if (points == 0) points = 64 * std::max<std::size_t>(a.size() - 1, 1);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const long double t = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(i) /
                          static_cast<long double>(points);
    const std::complex<long double> z(std::cos(t), std::sin(t));
    std::complex<long double> v = 0.0L;
    for (std::size_t j = a.size(); j-- > 0;) v = v * z + static_cast<long double>(a[j]);
    best = std::min(best, static_cast<double>(std::abs(v)));
  }
  return best;
}

/// Random skew-reciprocal Littlewood coefficients of degree 2m: a_m..a_{2m}
/// drawn uniformly from {-1, 1}, the lower half derived from the symmetry.
inline std::vector<long long> random_skew_reciprocal(std::size_t m, std::mt19937_64& rng) {
  std::vector<long long> a(2 * m + 1);
  for (std::size_t j = m; j <= 2 * m; ++j) a[j] = (rng() >> 63) != 0 ? 1 : -1;
  for (std::size_t j = 1; j <= m; ++j) a[m - j] = (j % 2 == 0) ? a[m + j] : -a[m + j];
  return a;
}

}  // namespace rsp

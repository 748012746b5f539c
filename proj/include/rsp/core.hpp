#pragma once

// Littlewood polynomials and the Rudin-Shapiro pairs (P_k, Q_k) built by
//   P_{k+1}(z) = P_k(z) + z^{2^k} Q_k(z),  Q_{k+1}(z) = P_k(z) - z^{2^k} Q_k(z),
// starting from P_0 = Q_0 = 1.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsp/error.hpp"

namespace rsp {

using Coefficient = std::int8_t;

/// Largest order k accepted by generate_pair unless the caller raises it.
/// 2^26 coefficients per polynomial is 64 MiB.
inline constexpr unsigned kDefaultMaxOrder = 26;

/// Polynomial with every coefficient in {-1, +1}; coefficient j multiplies z^j.
class LittlewoodPolynomial {
 public:
  explicit LittlewoodPolynomial(std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ContractError("Littlewood polynomial needs at least one coefficient");
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
      if (coeffs_[j] != 1 && coeffs_[j] != -1)
        throw ContractError("coefficient " + std::to_string(j) + " is not +1 or -1");
  }

  template <class Int>
  static LittlewoodPolynomial from_ints(std::span<const Int> values) {
    std::vector<Coefficient> c;
    c.reserve(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] != 1 && values[j] != -1)
        throw ContractError("coefficient " + std::to_string(j) + " is not +1 or -1");
      c.push_back(static_cast<Coefficient>(values[j]));
    }
    return LittlewoodPolynomial(std::move(c));
  }
  static LittlewoodPolynomial from_ints(std::initializer_list<int> values) {
    return from_ints(std::span<const int>(values.begin(), values.size()));
  }

  std::span<const Coefficient> coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  Coefficient operator[](std::size_t j) const noexcept { return coeffs_[j]; }

  /// S(1), exact.
  std::int64_t value_at_one() const noexcept {
    std::int64_t s = 0;
    for (Coefficient c : coeffs_) s += c;
    return s;
  }
  /// S(-1), exact.
  std::int64_t value_at_minus_one() const noexcept {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) s += (j % 2 == 0) ? coeffs_[j] : -coeffs_[j];
    return s;
  }

  std::vector<double> as_doubles() const { return {coeffs_.begin(), coeffs_.end()}; }

  friend bool operator==(const LittlewoodPolynomial&, const LittlewoodPolynomial&) = default;

 private:
  struct Unchecked {};
  LittlewoodPolynomial(Unchecked, std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) {}
  friend struct PairBuilder;

  std::vector<Coefficient> coeffs_;
};

struct RudinShapiroPair {
  unsigned k;
  std::size_t n;  // 2^k
  LittlewoodPolynomial p;
  LittlewoodPolynomial q;
};

enum class Component { P, Q };

inline char component_name(Component c) { return c == Component::P ? 'P' : 'Q'; }

struct PairBuilder {
  static RudinShapiroPair build(unsigned k) {
    std::size_t n = std::size_t{1} << k;
    std::vector<Coefficient> p(n), q(n);
    p[0] = q[0] = 1;
    for (std::size_t half = 1; half < n; half *= 2) {
      // Upper halves first: they read the current lower halves.
      for (std::size_t j = 0; j < half; ++j) {
        p[half + j] = q[j];
        q[half + j] = static_cast<Coefficient>(-q[j]);
      }
      for (std::size_t j = 0; j < half; ++j) q[j] = p[j];
    }
    return {k, n, LittlewoodPolynomial(LittlewoodPolynomial::Unchecked{}, std::move(p)),
            LittlewoodPolynomial(LittlewoodPolynomial::Unchecked{}, std::move(q))};
  }
  static LittlewoodPolynomial adopt(std::vector<Coefficient> c) {
    return LittlewoodPolynomial(LittlewoodPolynomial::Unchecked{}, std::move(c));
  }
};

/// Builds (P_k, Q_k) by the doubling recursion in O(2^k).
inline RudinShapiroPair generate_pair(unsigned k, unsigned max_order = kDefaultMaxOrder) {
  if (k > max_order) detail::limit_exceeded("Rudin-Shapiro order k =", k, max_order);
  return PairBuilder::build(k);
}

inline const LittlewoodPolynomial& select(const RudinShapiroPair& pair, Component c) {
  return c == Component::P ? pair.p : pair.q;
}

/// Values of P_k, Q_k at z = +1 and z = -1 next to their closed forms.
/// The closed forms hold for k >= 1; at k = 0 Q_0(-1) = 1 disagrees with them.
struct SpecialValues {
  unsigned k;
  std::int64_t p_at_1, p_at_minus1, q_at_1, q_at_minus1;
  std::int64_t expected_p_at_1;        // 2^[(k+1)/2]
  std::int64_t expected_q_at_minus1;   // (-1)^{k+1} 2^[(k+1)/2]
  std::int64_t expected_cross;         // P_k(-1) = Q_k(1) = (1 + (-1)^k)/2 * 2^[k/2]

  bool matches() const noexcept {
    return p_at_1 == expected_p_at_1 && q_at_minus1 == expected_q_at_minus1 &&
           p_at_minus1 == expected_cross && q_at_1 == expected_cross;
  }
};

inline SpecialValues special_values(const RudinShapiroPair& pair) {
  const unsigned k = pair.k;
  const std::int64_t hi = std::int64_t{1} << ((k + 1) / 2);
  SpecialValues v{};
  v.k = k;
  v.p_at_1 = pair.p.value_at_one();
  v.p_at_minus1 = pair.p.value_at_minus_one();
  v.q_at_1 = pair.q.value_at_one();
  v.q_at_minus1 = pair.q.value_at_minus_one();
  v.expected_p_at_1 = hi;
  v.expected_q_at_minus1 = (k % 2 == 1) ? hi : -hi;
  v.expected_cross = (k % 2 == 0) ? (std::int64_t{1} << (k / 2)) : 0;
  return v;
}

inline SpecialValues special_values(unsigned k, unsigned max_order = kDefaultMaxOrder) {
  return special_values(generate_pair(k, max_order));
}

/// Largest |q_j - (-1)^{k+1} (-1)^j p_{n-1-j}| over all j. The relation
/// Q_k(z) = (-1)^{k+1} z^{n-1} P_k(-1/z) holds iff this is 0, which is the
/// case for every k >= 1 (k = 0 gives 2).
inline int conjugate_coefficient_mismatch(const RudinShapiroPair& pair) {
  const std::size_t n = pair.n;
  const int sign_k = (pair.k % 2 == 1) ? 1 : -1;
  int worst = 0;
  for (std::size_t j = 0; j < n; ++j) {
    int expected = sign_k * ((j % 2 == 0) ? 1 : -1) * pair.p[n - 1 - j];
    int diff = pair.q[j] - expected;
    worst = std::max(worst, diff < 0 ? -diff : diff);
  }
  return worst;
}

}  // namespace rsp

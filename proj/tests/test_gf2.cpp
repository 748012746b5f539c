#include <gtest/gtest.h>

#include <random>

#include "rsp/core.hpp"
#include "rsp/gf2.hpp"
#include "rsp/roots.hpp"

using namespace rsp;

namespace {

GF2Poly random_poly(std::mt19937_64& rng, std::size_t max_degree) {
  GF2Poly p;
  const std::size_t deg = rng() % (max_degree + 1);
  for (std::size_t j = 0; j <= deg; ++j)
    if (rng() & 1) p.flip(j);
  return p;
}

std::vector<long long> to_ll(const LittlewoodPolynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

}  // namespace

TEST(GF2Poly, Basics) {
  GF2Poly zero;
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(zero.degree(), -1);
  EXPECT_EQ(zero.to_hex(), "0");
  auto p = GF2Poly::from_exponents({0, 2, 2, 5});
  EXPECT_EQ(p.degree(), 5);
  EXPECT_EQ(p.to_hex(), "21");
  EXPECT_TRUE(GF2Poly::one().is_one());
  auto big = GF2Poly::monomial(130);
  EXPECT_EQ(big.degree(), 130);
  EXPECT_EQ(big.to_hex(), "4" + std::string(32, '0'));
  big.flip(130);
  EXPECT_TRUE(big.is_zero());
}

TEST(GF2Poly, ShiftAndMultiply) {
  auto x_plus_1 = GF2Poly::from_exponents({0, 1});
  EXPECT_EQ(x_plus_1 * x_plus_1, GF2Poly::from_exponents({0, 2}));
  auto a = GF2Poly::from_exponents({0, 63});
  EXPECT_EQ(a.shifted(1), GF2Poly::from_exponents({1, 64}));
  EXPECT_EQ(a.shifted(64), GF2Poly::from_exponents({64, 127}));
}

TEST(GF2Poly, DivisionIdentity) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_poly(rng, 300), b = random_poly(rng, 150);
    if (b.is_zero()) continue;
    auto [q, r] = a.divmod(b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
  }
  EXPECT_THROW(GF2Poly::one().divmod(GF2Poly()), ContractError);
}

TEST(GF2Gcd, Examples) {
  auto x2p1 = GF2Poly::from_exponents({0, 2});
  EXPECT_TRUE(gf2_gcd(x2p1, GF2Poly::monomial(1)).is_one());
  EXPECT_EQ(gf2_gcd(x2p1, GF2Poly::from_exponents({0, 1})), GF2Poly::from_exponents({0, 1}));
  EXPECT_EQ(gf2_gcd(x2p1, GF2Poly()), x2p1);
  EXPECT_THROW(gf2_gcd(GF2Poly(), GF2Poly()), ContractError);
}

TEST(GF2Gcd, Properties) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_poly(rng, 120), b = random_poly(rng, 120), c = random_poly(rng, 120);
    auto common = random_poly(rng, 20);
    if (common.is_zero()) common = GF2Poly::one();
    a = a * common;
    b = b * common;
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    auto g = gf2_gcd(a, b);
    EXPECT_EQ(g, gf2_gcd(b, a));
    EXPECT_TRUE((a % g).is_zero());
    EXPECT_TRUE((b % g).is_zero());
    EXPECT_TRUE((g % common).is_zero());
    EXPECT_EQ(gf2_gcd(a, gf2_gcd(b, c)), gf2_gcd(gf2_gcd(a, b), c));
  }
}

TEST(SkewReciprocal, Examples) {
  const long long golden[] = {1, 1, -1};
  auto r = is_skew_reciprocal(golden);
  EXPECT_TRUE(r.skew_reciprocal);
  EXPECT_EQ(r.m, 1u);

  auto p2 = generate_pair(2);
  auto odd = is_skew_reciprocal(to_ll(p2.p));
  EXPECT_FALSE(odd.skew_reciprocal);
  EXPECT_EQ(odd.reason, "odd degree");

  const long long ones[] = {1, 1, 1};
  EXPECT_FALSE(is_skew_reciprocal(ones).skew_reciprocal);

  const long long odd_coeffs[] = {1, 3, -1};
  EXPECT_FALSE(is_skew_reciprocal(odd_coeffs).skew_reciprocal);
  EXPECT_TRUE(is_skew_reciprocal(odd_coeffs, CoefficientMode::AllOdd).skew_reciprocal);
  const long long even_coeff[] = {1, 2, -1};
  EXPECT_FALSE(is_skew_reciprocal(even_coeff, CoefficientMode::AllOdd).skew_reciprocal);
  const long long zero_lead[] = {1, 1, 0};
  EXPECT_EQ(is_skew_reciprocal(zero_lead, CoefficientMode::AllOdd).reason, "leading coefficient is zero");
}

TEST(ABParts, HandComputedCenterOne) {
  // m = 1: A = a_1, B = a_2 (z - 1/z); z A = z, z B = z^2 - 1 -> 1 + z^2 mod 2.
  const long long golden[] = {1, 1, -1};
  auto parts = build_ab_parts(golden);
  EXPECT_EQ(parts.a_tilde, GF2Poly::monomial(1));
  EXPECT_EQ(parts.b_tilde, GF2Poly::from_exponents({0, 2}));
  EXPECT_TRUE((parts.b_tilde + parts.a_tilde.shifted(1)).is_one());
  const long long ones[] = {1, 1, 1};
  EXPECT_THROW(build_ab_parts(ones), ContractError);
}

TEST(ABParts, DifferenceCollapsesToOne) {
  std::mt19937_64 rng(4);
  for (std::size_t m = 1; m <= 40; ++m)
    for (int trial = 0; trial < 5; ++trial) {
      auto a = random_skew_reciprocal(m, rng);
      ASSERT_TRUE(is_skew_reciprocal(a).skew_reciprocal);
      auto parts = build_ab_parts(a);
      EXPECT_EQ(parts.a_tilde.degree(), static_cast<std::ptrdiff_t>(m % 2 == 0 ? 2 * m : 2 * m - 1));
      EXPECT_EQ(parts.b_tilde.degree(), static_cast<std::ptrdiff_t>(m % 2 == 0 ? 2 * m - 1 : 2 * m));
      const GF2Poly combo = (m % 2 == 0) ? parts.a_tilde + parts.b_tilde.shifted(1)
                                         : parts.b_tilde + parts.a_tilde.shifted(1);
      EXPECT_TRUE(combo.is_one()) << "m=" << m;
    }
}

TEST(Certificate, Examples) {
  const long long golden[] = {1, 1, -1};
  auto c = mercer_certificate(golden);
  EXPECT_TRUE(c.certified_zero_free_on_circle);
  EXPECT_EQ(c.parity_case, "odd-m");
  EXPECT_EQ(c.gcd.to_hex(), "1");

  auto p3 = mercer_certificate(to_ll(generate_pair(3).p));
  EXPECT_FALSE(p3.certified_zero_free_on_circle);
  EXPECT_FALSE(p3.is_skew_reciprocal);
  EXPECT_EQ(p3.parity_case, "n/a");
  EXPECT_NE(p3.reason.find("odd degree"), std::string::npos);

  const long long odd_coeffs[] = {1, 3, -1};
  EXPECT_TRUE(mercer_certificate(odd_coeffs, CoefficientMode::AllOdd).certified_zero_free_on_circle);
  EXPECT_FALSE(mercer_certificate(odd_coeffs).certified_zero_free_on_circle);

  // Degree 4, m = 2: a = (a0..a4) with a1 = -a3, a0 = a4.
  const long long even_m[] = {1, -1, 1, 1, 1};
  auto e = mercer_certificate(even_m);
  EXPECT_EQ(e.parity_case, "even-m");
  EXPECT_TRUE(e.certified_zero_free_on_circle);
}

TEST(Certificate, RandomInputsCertifiedAndNumericallyConfirmed) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 32;
    auto a = random_skew_reciprocal(m, rng);
    auto c = mercer_certificate(a);
    ASSERT_TRUE(c.certified_zero_free_on_circle) << "trial " << trial;
    if (trial % 10 == 0) {
      EXPECT_GT(circle_min_modulus(a), 1e-9);
      std::vector<double> d(a.begin(), a.end());
      auto roots = find_roots(std::span<const double>(d));
      for (auto z : roots.roots) EXPECT_GE(std::abs(std::abs(z) - 1.0), 1e-7);
    }
  }
}

TEST(Certificate, UncertifiedWhenCircleZeroExists) {
  // 1 + z^3 vanishes at z = -1; it has a zero coefficient, so it is not even classified.
  const long long cube[] = {1, 0, 0, 1};
  EXPECT_FALSE(mercer_certificate(cube, CoefficientMode::AllOdd).certified_zero_free_on_circle);
  const long long sym[] = {1, 1, 1};  // 1 + z + z^2, zeros at cube roots of unity
  auto c = mercer_certificate(sym);
  EXPECT_FALSE(c.certified_zero_free_on_circle);
  EXPECT_LT(circle_min_modulus(sym, 3 * 64), 1e-12);
}

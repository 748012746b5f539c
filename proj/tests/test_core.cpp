#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rsp/cache.hpp"
#include "rsp/core.hpp"
#include "rsp/identities.hpp"

using namespace rsp;

namespace {

std::vector<int> ints(const LittlewoodPolynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

std::filesystem::path fresh_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("rsp_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(Generate, SmallOrdersByHand) {
  auto p0 = generate_pair(0);
  EXPECT_EQ(ints(p0.p), (std::vector<int>{1}));
  EXPECT_EQ(ints(p0.q), (std::vector<int>{1}));
  auto p1 = generate_pair(1);
  EXPECT_EQ(ints(p1.p), (std::vector<int>{1, 1}));
  EXPECT_EQ(ints(p1.q), (std::vector<int>{1, -1}));
  auto p2 = generate_pair(2);
  EXPECT_EQ(ints(p2.p), (std::vector<int>{1, 1, 1, -1}));
  EXPECT_EQ(ints(p2.q), (std::vector<int>{1, 1, -1, 1}));
  EXPECT_EQ(p2.n, 4u);
  EXPECT_EQ(p2.p.degree(), 3u);
}

TEST(Generate, MatchesConcatenationOracle) {
  for (unsigned k = 0; k <= 14; ++k) {
    auto pair = generate_pair(k);
    auto [p, q] = oracle::rudin_shapiro(k);
    ASSERT_EQ(ints(pair.p), p) << "k=" << k;
    ASSERT_EQ(ints(pair.q), q) << "k=" << k;
  }
}

TEST(Generate, PrefixProperty) {
  auto big = generate_pair(12);
  for (unsigned k = 0; k < 12; ++k) {
    auto small = generate_pair(k);
    for (std::size_t j = 0; j < small.n; ++j) ASSERT_EQ(small.p[j], big.p[j]);
  }
}

TEST(Generate, ComplementaryAutocorrelation) {
  for (unsigned k = 1; k <= 10; ++k) {
    auto pair = generate_pair(k);
    auto cp = oracle::autocorrelation(ints(pair.p));
    auto cq = oracle::autocorrelation(ints(pair.q));
    EXPECT_EQ(cp[0] + cq[0], static_cast<long long>(2 * pair.n));
    for (std::size_t u = 1; u < pair.n; ++u) ASSERT_EQ(cp[u] + cq[u], 0) << "k=" << k << " u=" << u;
  }
}

TEST(Generate, OrderLimit) {
  EXPECT_THROW(generate_pair(kDefaultMaxOrder + 1), ResourceLimitError);
  EXPECT_THROW(generate_pair(12, 10), ResourceLimitError);
  EXPECT_NO_THROW(generate_pair(10, 10));
}

TEST(Littlewood, RejectsNonUnitCoefficients) {
  EXPECT_THROW(LittlewoodPolynomial::from_ints({1, 0, -1}), ContractError);
  EXPECT_THROW(LittlewoodPolynomial::from_ints({1, 2}), ContractError);
  EXPECT_THROW(LittlewoodPolynomial(std::vector<Coefficient>{}), ContractError);
  auto p = LittlewoodPolynomial::from_ints({1, -1, -1});
  EXPECT_EQ(p.value_at_one(), -1);
  EXPECT_EQ(p.value_at_minus_one(), 1);
}

TEST(SpecialValues, ClosedForms) {
  for (unsigned k = 1; k <= 20; ++k) {
    auto pair = generate_pair(k);
    const auto sv = special_values(pair);
    EXPECT_TRUE(sv.matches()) << "k=" << k;
    const std::int64_t hi = std::int64_t{1} << ((k + 1) / 2);
    long long p1 = 0, pm1 = 0, q1 = 0, qm1 = 0;
    for (std::size_t j = 0; j < pair.n; ++j) {
      const int s = (j % 2 == 0) ? 1 : -1;
      p1 += pair.p[j];
      q1 += pair.q[j];
      pm1 += s * pair.p[j];
      qm1 += s * pair.q[j];
    }
    EXPECT_EQ(p1, hi);
    EXPECT_EQ(qm1, (k % 2 == 1 ? hi : -hi));
    const long long cross = (k % 2 == 0) ? (1LL << (k / 2)) : 0;
    EXPECT_EQ(pm1, cross);
    EXPECT_EQ(q1, cross);
  }
}

TEST(SpecialValues, Examples) {
  EXPECT_EQ(special_values(0).p_at_1, 1);
  EXPECT_EQ(special_values(3).p_at_1, 4);
  EXPECT_EQ(special_values(3).q_at_minus1, 4);
  EXPECT_EQ(special_values(4).p_at_minus1, 4);
  EXPECT_EQ(special_values(4).q_at_minus1, -4);
}

TEST(SpecialValues, OrderZeroIsOutsideClosedForms) {
  const auto sv = special_values(0);
  EXPECT_EQ(sv.q_at_minus1, 1);
  EXPECT_EQ(sv.expected_q_at_minus1, -1);
  EXPECT_FALSE(sv.matches());
}

TEST(Identities, ConjugateCoefficientsExact) {
  EXPECT_EQ(conjugate_coefficient_mismatch(generate_pair(0)), 2);
  for (unsigned k = 1; k <= 18; ++k) EXPECT_EQ(conjugate_coefficient_mismatch(generate_pair(k)), 0) << "k=" << k;
}

TEST(Identities, ConjugateModulusOnGrid) {
  for (unsigned k : {1u, 5u, 10u, 14u}) {
    auto r = conjugate_relation_residual(generate_pair(k), 4096);
    EXPECT_EQ(r.coefficient_mismatch, 0.0);
    EXPECT_LE(r.modulus_residual, 1e-10 * std::sqrt(static_cast<double>(std::size_t{1} << k)));
  }
}

TEST(Identities, ParallelogramResidual) {
  for (unsigned k = 0; k <= 14; ++k) {
    auto pair = generate_pair(k);
    EXPECT_LE(parallelogram_residual(pair, 16 * pair.n), 1e-12) << "k=" << k;
  }
  EXPECT_THROW(parallelogram_residual(generate_pair(2), 0), ContractError);
}

TEST(Cache, RoundTripIsExact) {
  const auto dir = fresh_dir("cache");
  PairCache cache(dir);
  for (unsigned k : {0u, 1u, 7u, 13u}) {
    auto generated = cache.get_or_generate(k);
    ASSERT_TRUE(std::filesystem::exists(cache.path_for(k)));
    auto loaded = cache.load(k);
    ASSERT_TRUE(loaded.has_value());
    EXPECT_EQ(loaded->p, generated.p);
    EXPECT_EQ(loaded->q, generated.q);
    EXPECT_EQ(loaded->p, generate_pair(k).p);
  }
  EXPECT_FALSE(cache.load(20).has_value());
  std::filesystem::remove_all(dir);
}

TEST(Cache, CorruptRecordsRejected) {
  std::stringstream ss;
  write_pair(ss, generate_pair(4));
  std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 6u + 2u + 4u + 32u);

  std::string bad_coeff = bytes;
  bad_coeff[12] = 0;
  std::istringstream in1(bad_coeff);
  EXPECT_THROW(read_pair(in1), io::FormatError);

  std::istringstream in2(bytes.substr(0, bytes.size() - 1));
  EXPECT_THROW(read_pair(in2), io::FormatError);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in3(bad_magic);
  EXPECT_THROW(read_pair(in3), io::FormatError);

  std::istringstream ok(bytes);
  EXPECT_EQ(read_pair(ok).p, generate_pair(4).p);
}

TEST(Cache, MismatchedOrderInFile) {
  const auto dir = fresh_dir("mismatch");
  PairCache cache(dir);
  cache.store(generate_pair(3));
  std::filesystem::rename(cache.path_for(3), cache.path_for(5));
  EXPECT_THROW(cache.load(5), io::FormatError);
  std::filesystem::remove_all(dir);
}

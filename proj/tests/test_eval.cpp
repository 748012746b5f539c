#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rsp/eval.hpp"
#include "rsp/parallel.hpp"

using namespace rsp;

namespace {

struct ThreadGuard {
  ~ThreadGuard() { set_thread_count(0); }
};

}  // namespace

TEST(CirclePoint, TurnAndTheta) {
  auto p = CirclePoint::from_theta(std::numbers::pi);
  EXPECT_NEAR(static_cast<double>(p.turn()), 0.5, 1e-16);
  EXPECT_NEAR(CirclePoint::from_turn(0.25L).theta(), std::numbers::pi / 2, 1e-15);
}

TEST(EvalPair, SmallValuesByHand) {
  auto pair = generate_pair(1);
  auto v = eval_pair_point(pair, CirclePoint::from_theta(std::numbers::pi));
  EXPECT_LT(std::abs(v.p), 1e-15);                       // 1 + (-1)
  EXPECT_NEAR(std::abs(v.q - std::complex<double>(2, 0)), 0.0, 1e-15);  // 1 - (-1)
  auto pair0 = generate_pair(0);
  auto w = eval_pair_point(pair0, CirclePoint::from_theta(1.234));
  EXPECT_EQ(w.p, std::complex<double>(1, 0));
}

TEST(EvalPair, MatchesDirectTrigSum) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (unsigned k = 0; k <= 12; ++k) {
    auto pair = generate_pair(k);
    auto [p, q] = oracle::rudin_shapiro(k);
    for (int trial = 0; trial < 8; ++trial) {
      const double theta = angle(rng);
      auto v = eval_pair_point(pair, CirclePoint::from_theta(theta));
      auto ep = oracle::direct_sum(p, theta), eq = oracle::direct_sum(q, theta);
      const double scale = std::sqrt(2.0 * static_cast<double>(pair.n));
      EXPECT_LT(std::abs(std::complex<double>(ep) - v.p), 1e-12 * scale) << "k=" << k;
      EXPECT_LT(std::abs(std::complex<double>(eq) - v.q), 1e-12 * scale) << "k=" << k;
    }
  }
}

TEST(EvalPair, HornerAgreesWithRecursion) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  for (unsigned k = 1; k <= 16; ++k) {
    auto pair = generate_pair(k);
    const double scale = std::sqrt(2.0 * static_cast<double>(pair.n));
    for (int trial = 0; trial < 16; ++trial) {
      auto pt = CirclePoint::from_turn(turn(rng));
      auto v = eval_pair_point(pair, pt);
      EXPECT_LT(std::abs(eval_horner(pair.p, pt) - v.p), 1e-11 * scale) << "k=" << k;
      EXPECT_LT(std::abs(eval_horner(pair.q, pt) - v.q), 1e-11 * scale) << "k=" << k;
    }
  }
}

TEST(EvalHorner, Examples) {
  auto one_plus_z = LittlewoodPolynomial::from_ints({1, 1});
  EXPECT_LT(std::abs(eval_horner(one_plus_z, CirclePoint::from_theta(std::numbers::pi))), 1e-15);
  auto p2 = generate_pair(2);
  auto at = CirclePoint::from_theta(std::numbers::pi / 2);
  EXPECT_LT(std::abs(eval_horner(p2.p, at) - std::complex<double>(0, 2)), 1e-15);
  EXPECT_LT(std::abs(eval_horner(p2.p, at) - eval_pair_point(p2, at).p), 1e-15);
}

TEST(EvalJet, DerivativeMatchesFiniteDifference) {
  for (unsigned k : {1u, 4u, 9u}) {
    auto pair = generate_pair(k);
    auto [p, q] = oracle::rudin_shapiro(k);
    const double theta = 0.7312;
    auto jet = eval_pair_jet(pair, CirclePoint::from_theta(theta));
    // d/dt sum a_j e^{ijt} = sum i j a_j e^{ijt}
    std::complex<long double> dp = 0, dq = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      std::complex<long double> e(std::cos(j * static_cast<long double>(theta)),
                                  std::sin(j * static_cast<long double>(theta)));
      dp += std::complex<long double>(0, j) * static_cast<long double>(p[j]) * e;
      dq += std::complex<long double>(0, j) * static_cast<long double>(q[j]) * e;
    }
    const double scale = static_cast<double>(pair.n) * std::sqrt(static_cast<double>(pair.n));
    EXPECT_LT(std::abs(std::complex<double>(dp) - jet.dp), 1e-11 * scale);
    EXPECT_LT(std::abs(std::complex<double>(dq) - jet.dq), 1e-11 * scale);
  }
}

TEST(EvalGrid, Examples) {
  auto g0 = eval_grid(generate_pair(0), Arc::full(), 4);
  for (auto v : g0.values_p) EXPECT_EQ(v, std::complex<double>(1, 0));

  auto g3 = eval_grid(generate_pair(3), Arc::full(), 64);
  double mean = 0;
  for (auto v : g3.values_p) mean += std::norm(v);
  EXPECT_NEAR(mean / 64.0, 8.0, 1e-12);

  auto g5 = eval_grid(generate_pair(5), Arc(0.0, std::numbers::pi), 1000);
  EXPECT_NEAR(g5.spec.theta(0), std::numbers::pi / 2000, 1e-15);
  EXPECT_NEAR(static_cast<double>(g5.spec.turn(0)), 1.0 / 4000, 1e-17);
}

TEST(EvalGrid, LatticeIncludesPlusAndMinusOne) {
  auto pair = generate_pair(3);
  auto g = eval_grid(pair, Arc::full(), 8, false);
  EXPECT_EQ(g.spec.turn(0), 0.0L);
  EXPECT_EQ(g.values_p[0], std::complex<double>(static_cast<double>(pair.p.value_at_one()), 0));
  EXPECT_NEAR(g.values_p[4].imag(), 0.0, 1e-14);
  EXPECT_NEAR(g.values_p[4].real(), static_cast<double>(pair.p.value_at_minus_one()), 1e-14);
}

TEST(EvalGrid, Limits) {
  auto pair = generate_pair(2);
  EXPECT_THROW(eval_grid(pair, Arc::full(), 1), ContractError);
  EXPECT_THROW(eval_grid(pair, Arc::full(), 1000, true, 999), ResourceLimitError);
}

TEST(EvalGrid, IndependentOfThreadCount) {
  ThreadGuard guard;
  auto pair = generate_pair(12);
  set_thread_count(1);
  auto a = eval_grid(pair, Arc(0.3, 2.9), 50000);
  for (unsigned t : {2u, 8u}) {
    set_thread_count(t);
    auto b = eval_grid(pair, Arc(0.3, 2.9), 50000);
    ASSERT_EQ(std::memcmp(a.values_p.data(), b.values_p.data(), a.values_p.size() * sizeof(a.values_p[0])), 0);
    ASSERT_EQ(std::memcmp(a.values_q.data(), b.values_q.data(), a.values_q.size() * sizeof(a.values_q[0])), 0);
  }
}

TEST(GridDump, RoundTrip) {
  auto g = eval_grid(generate_pair(6), Arc(-1.0, 2.5), 300, false);
  std::stringstream ss;
  write_grid_dump(ss, g);
  EXPECT_EQ(ss.str().substr(0, 6), "RSGRID");
  EXPECT_EQ(ss.str().size(), 6u + 4 + 8 + 8 + 8 + 1 + 300u * 32);
  auto back = read_grid_dump(ss);
  EXPECT_EQ(back.k, 6u);
  EXPECT_EQ(back.arc().alpha(), -1.0);
  EXPECT_EQ(back.arc().beta(), 2.5);
  EXPECT_FALSE(back.spec.half_offset);
  EXPECT_EQ(back.values_p, g.values_p);
  EXPECT_EQ(back.values_q, g.values_q);
}

TEST(GridDump, RejectsDamage) {
  auto g = eval_grid(generate_pair(2), Arc::full(), 8);
  std::stringstream ss;
  write_grid_dump(ss, g);
  const std::string bytes = ss.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_grid_dump(truncated), io::FormatError);
  std::string bad = bytes;
  bad[1] = 'Z';
  std::istringstream badmagic(bad);
  EXPECT_THROW(read_grid_dump(badmagic), io::FormatError);
  std::istringstream capped(bytes);
  EXPECT_THROW(read_grid_dump(capped, 4), ResourceLimitError);
}

TEST(PairwiseSum, FixedTreeAndAccurate) {
  std::vector<double> v(100003);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  long double exact = 0;
  for (auto& x : v) {
    x = d(rng);
    exact += x;
  }
  const double s = pairwise_sum(v);
  EXPECT_NEAR(s, static_cast<double>(exact), 1e-11);
  EXPECT_EQ(pairwise_sum(std::span<const double>()), 0.0);
}

TEST(Arc, Validation) {
  EXPECT_THROW(Arc(1.0, 1.0), ContractError);
  EXPECT_THROW(Arc(0.0, 7.0), ContractError);
  EXPECT_THROW(Arc(0.0, std::nan("")), ContractError);
  EXPECT_TRUE(Arc::full().is_full_circle());
  EXPECT_EQ(Arc::full().turns(), 1.0L);
  EXPECT_FALSE(Arc(0.0, 1.0).is_full_circle());
}

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsp/norms.hpp"

using namespace rsp;

namespace {

struct ThreadGuard {
  ~ThreadGuard() { set_thread_count(0); }
};

}  // namespace

TEST(MqArc, ParsevalOnFullCircle) {
  for (unsigned k = 0; k <= 14; ++k) {
    auto e = mq_arc(PairComponentFn{k, Component::P}, Arc::full(), 2.0);
    EXPECT_NEAR(e.value / std::pow(2.0, k / 2.0), 1.0, 1e-12) << "k=" << k;
    EXPECT_FALSE(e.flagged);
    auto eq = mq_arc(PairComponentFn{k, Component::Q}, Arc::full(), 2.0);
    EXPECT_NEAR(eq.value / std::pow(2.0, k / 2.0), 1.0, 1e-12);
  }
}

TEST(MqArc, FourthMomentMatchesAutocorrelation) {
  for (unsigned k : {2u, 5u, 8u, 10u}) {
    auto [p, q] = oracle::rudin_shapiro(k);
    const double expected = std::pow(static_cast<double>(oracle::l4_fourth_power(p)), 0.25);
    auto e = mq_arc(PairComponentFn{k, Component::P}, Arc::full(), 4.0);
    EXPECT_NEAR(e.value / expected, 1.0, 1e-12) << "k=" << k;
  }
}

TEST(MqArc, ConstantPolynomial) {
  for (double q : {0.25, 1.0, 3.0}) {
    auto e = mq_arc(PairComponentFn{0, Component::P}, Arc(0.2, 1.1), q);
    EXPECT_NEAR(e.value, 1.0, 1e-14);
  }
}

TEST(MqArc, PolynomialViewAgreesWithPairView) {
  auto pair = generate_pair(7);
  auto a = mq_arc(polynomial(pair.p), Arc(0.5, 2.0), 1.5, 4096);
  auto b = mq_arc(component(pair, Component::P), Arc(0.5, 2.0), 1.5, 4096);
  EXPECT_NEAR(a.value / b.value, 1.0, 1e-12);
}

TEST(MqArc, Contracts) {
  PairComponentFn f{3, Component::P};
  EXPECT_THROW(mq_arc(f, Arc::full(), 0.0), ContractError);
  EXPECT_THROW(mq_arc(f, Arc::full(), -1.0), ContractError);
  EXPECT_THROW(mq_arc(f, Arc::full(), 2.0, 1), ContractError);
  QuadraturePolicy tight;
  tight.max_count = 1000;
  EXPECT_THROW(mq_arc(f, Arc::full(), 2.0, 5000, tight), ResourceLimitError);
}

TEST(MqArc, DefaultCount) {
  EXPECT_EQ(default_sample_count(7, Arc::full()), 4096u);
  EXPECT_EQ(default_sample_count(1023, Arc::full()), 16384u);
  EXPECT_EQ(default_sample_count(7, Arc(0.0, 0.01)), 1024u);
}

TEST(MqArc, PowerMeansNonincreasingAsQDecreases) {
  const double qs[] = {2.0, 1.0, 0.5, 0.25, 0.125};
  for (const Arc& arc : {Arc::full(), Arc(0.0, std::numbers::pi / 2)}) {
    auto seq = mq_limit_diagnostic(PairComponentFn{8, Component::P}, arc, qs);
    ASSERT_EQ(seq.size(), 6u);
    EXPECT_EQ(seq.back().q, 0.0);
    EXPECT_TRUE(is_nonincreasing(seq, 2e-3));
    // The gap to M_0 shrinks as q decreases.
    for (std::size_t i = 1; i + 1 < seq.size(); ++i)
      EXPECT_LE(seq[i].value - seq.back().value, seq[i - 1].value - seq.back().value + 1e-9);
  }
}

TEST(MqLimit, RejectsBadLists) {
  const double increasing[] = {0.5, 1.0};
  const double negative[] = {1.0, -1.0};
  PairComponentFn f{4, Component::P};
  EXPECT_THROW(mq_limit_diagnostic(f, Arc::full(), increasing), ContractError);
  EXPECT_THROW(mq_limit_diagnostic(f, Arc::full(), negative), ContractError);
  EXPECT_THROW(mq_limit_diagnostic(f, Arc::full(), std::span<const double>()), ContractError);
}

TEST(MahlerArc, KnownValues) {
  // M_0(1 + z) = 1 despite the zero at z = -1.
  auto one_plus_z = LittlewoodPolynomial::from_ints({1, 1});
  auto e = mahler_arc(polynomial(one_plus_z), Arc::full(), 1 << 16);
  EXPECT_NEAR(e.value, 1.0, 1e-3);
  // 1 + z - z^2 has roots phi and -1/phi, so M_0 = phi.
  auto golden = LittlewoodPolynomial::from_ints({1, 1, -1});
  auto g = mahler_arc(polynomial(golden), Arc::full());
  EXPECT_NEAR(g.value, std::numbers::phi, 1e-9);
  EXPECT_FALSE(g.flagged);
}

TEST(MahlerArc, ExclusionRadiusDropsNearZeros) {
  auto one_plus_z = LittlewoodPolynomial::from_ints({1, 1});
  auto plain = mahler_arc(polynomial(one_plus_z), Arc::full(), 4096);
  auto cut = mahler_arc(polynomial(one_plus_z), Arc::full(), 4096, 0.05);
  EXPECT_EQ(plain.dropped_measure, 0.0);
  EXPECT_GT(cut.dropped_measure, 0.09);
  EXPECT_LT(cut.dropped_measure, 0.11);
  EXPECT_TRUE(cut.flagged);  // about 1.6% of samples dropped
  EXPECT_NE(cut.flag_reason.find("excluded fraction"), std::string::npos);
  EXPECT_THROW(mahler_arc(polynomial(one_plus_z), Arc::full(), 4096, -1.0), ContractError);
}

TEST(MahlerArc, QMatchesPOnFullCircle) {
  for (unsigned k : {6u, 11u}) {
    auto ep = mahler_arc(PairComponentFn{k, Component::P}, Arc::full());
    auto eq = mahler_arc(PairComponentFn{k, Component::Q}, Arc::full());
    EXPECT_NEAR(ep.value / eq.value, 1.0, 1e-12);
  }
}

TEST(Problem55, Examples) {
  auto zero = problem_5_5_quantity(0);
  EXPECT_TRUE(zero.estimate.flagged);
  EXPECT_NE(zero.estimate.flag_reason.find("degenerate"), std::string::npos);

  auto one = problem_5_5_quantity(1, 1 << 16);
  EXPECT_NEAR(one.estimate.value, 1.0, 1e-3);
  EXPECT_NEAR(one.ratio, 1.0 / std::sqrt(2.0), 1e-3);

  auto twelve = problem_5_5_quantity(12);
  EXPECT_GT(twelve.ratio, 0.0);
}

TEST(Norms, IndependentOfThreadCount) {
  ThreadGuard guard;
  const double qs[] = {0.5, 1.0, 4.0};
  set_thread_count(1);
  auto a = mq_arc_multi(PairComponentFn{13, Component::Q}, Arc(1.0, 4.0), qs);
  auto m = mahler_arc(PairComponentFn{13, Component::P}, Arc::full());
  for (unsigned t : {2u, 8u}) {
    set_thread_count(t);
    auto b = mq_arc_multi(PairComponentFn{13, Component::Q}, Arc(1.0, 4.0), qs);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].value, b[i].value);
      EXPECT_EQ(a[i].refined_value, b[i].refined_value);
    }
    EXPECT_EQ(mahler_arc(PairComponentFn{13, Component::P}, Arc::full()).value, m.value);
  }
}

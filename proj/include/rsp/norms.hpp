#pragma once

// Integral means of |S(e^{it})| over a subarc:
//   M_q(S,[a,b]) = ( (1/(b-a)) \int_a^b |S(e^{it})|^q dt )^{1/q},  q > 0,
//   M_0(S,[a,b]) = exp( (1/(b-a)) \int_a^b log|S(e^{it})| dt ).
// Midpoint rule on half-offset uniform grids. Every estimate is repeated at
// twice the resolution and the relative step between the two is recorded.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rsp/arc.hpp"
#include "rsp/core.hpp"
#include "rsp/eval.hpp"
#include "rsp/parallel.hpp"

namespace rsp {

/// Anything that can report |S| at a turn fraction of the circle.
template <class F>
concept CircleFunction = requires(const F& f, long double u) {
  { f.modulus(u) } -> std::convertible_to<double>;
  { f.degree() } -> std::convertible_to<std::size_t>;
};

/// P_k or Q_k through the O(k) recursion.
struct PairComponentFn {
  unsigned k;
  Component which;
  std::size_t degree() const { return (std::size_t{1} << k) - 1; }
  double modulus(long double u) const {
    PairValue v = detail::eval_pair_turn(k, u);
    return std::abs(which == Component::P ? v.p : v.q);
  }
};

inline PairComponentFn component(const RudinShapiroPair& pair, Component which) { return {pair.k, which}; }

/// Arbitrary Littlewood polynomial through Horner. The polynomial must outlive this view.
struct PolynomialFn {
  const LittlewoodPolynomial* poly;
  std::size_t degree() const { return poly->degree(); }
  double modulus(long double u) const { return std::abs(eval_horner(*poly, CirclePoint::from_turn(u))); }
};

inline PolynomialFn polynomial(const LittlewoodPolynomial& poly) { return {&poly}; }

struct QuadraturePolicy {
  double tol_q_at_least_1 = 1e-6;
  double tol_q_below_1 = 1e-4;
  double tol_log = 1e-3;
  double underflow_floor = 1e-300;
  double max_excluded_fraction = 0.01;
  /// Local minima below this fraction of the sample maximum count as near-zeros
  /// for the exclusion-radius option of mahler_arc.
  double near_zero_level = 1e-3;
  std::size_t max_count = std::size_t{1} << 26;

  double tolerance_for(double q) const { return q == 0.0 ? tol_log : (q >= 1.0 ? tol_q_at_least_1 : tol_q_below_1); }
};

/// max(4096, 16 (deg+1)) samples per full turn, scaled to the arc, at least 1024.
inline std::size_t default_sample_count(std::size_t degree, const Arc& arc) {
  const double full = std::max(4096.0, 16.0 * static_cast<double>(degree + 1));
  const double scaled = std::ceil(full * static_cast<double>(arc.turns()));
  return std::max<std::size_t>(1024, static_cast<std::size_t>(scaled));
}

struct NormEstimate {
  double q = 0.0;  // 0 encodes the Mahler measure
  double value = 0.0;
  std::size_t count = 0;
  double refined_value = 0.0;
  double rel_step = 0.0;
  bool flagged = false;
  std::size_t excluded = 0;       // samples dropped at the base resolution
  double excluded_fraction = 0.0;
  double dropped_measure = 0.0;   // angular measure removed by the exclusion radius
  std::string flag_reason;
};

namespace detail {

inline double relative_step(double value, double refined) {
  return std::abs(value - refined) / std::max(std::abs(value), std::numeric_limits<double>::min());
}

inline void finish(NormEstimate& e, const QuadraturePolicy& policy) {
  e.rel_step = relative_step(e.value, e.refined_value);
  const double tol = policy.tolerance_for(e.q);
  if (e.rel_step > tol) {
    e.flagged = true;
    e.flag_reason = "unconverged: relative step above " + std::to_string(tol);
  }
}

inline double power_mean(std::span<const double> samples, double q) {
  std::vector<double> powered(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j)
    powered[j] = (q == 2.0) ? samples[j] * samples[j] : std::pow(samples[j], q);
  const double mean = pairwise_sum(powered) / static_cast<double>(samples.size());
  return (q == 2.0) ? std::sqrt(mean) : std::pow(mean, 1.0 / q);
}

struct LogMean {
  double value = 0.0;
  std::size_t excluded = 0;
  std::size_t dropped = 0;
  bool degenerate = false;
};

inline LogMean log_mean(std::span<const double> samples, const GridSpec& grid, double exclusion_radius,
                        const QuadraturePolicy& policy) {
  const std::size_t count = samples.size();
  std::vector<char> keep(count, 1);
  LogMean out;
  for (std::size_t j = 0; j < count; ++j)
    if (!(samples[j] >= policy.underflow_floor)) {
      keep[j] = 0;
      ++out.excluded;
    }
  if (exclusion_radius > 0.0 && count >= 3) {
    const double peak = *std::max_element(samples.begin(), samples.end());
    const double level = policy.near_zero_level * peak;
    const bool periodic = grid.arc.is_full_circle();
    const double h = grid.step();
    const auto reach = static_cast<std::ptrdiff_t>(std::floor(exclusion_radius / h));
    const auto n = static_cast<std::ptrdiff_t>(count);
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      auto at = [&](std::ptrdiff_t i) -> double {
        if (periodic) return samples[static_cast<std::size_t>(((i % n) + n) % n)];
        if (i < 0 || i >= n) return std::numeric_limits<double>::infinity();
        return samples[static_cast<std::size_t>(i)];
      };
      const double s = samples[static_cast<std::size_t>(j)];
      if (!(s < level) || s > at(j - 1) || s > at(j + 1)) continue;
      for (std::ptrdiff_t d = -reach; d <= reach; ++d) {
        std::ptrdiff_t i = j + d;
        if (periodic) i = ((i % n) + n) % n;
        else if (i < 0 || i >= n) continue;
        auto& flag = keep[static_cast<std::size_t>(i)];
        if (flag == 1) {
          flag = 2;  // dropped by radius
          ++out.dropped;
        }
      }
    }
  }
  std::vector<double> logs;
  logs.reserve(count);
  for (std::size_t j = 0; j < count; ++j)
    if (keep[j] == 1) logs.push_back(std::log(samples[j]));
  if (logs.empty()) {
    out.degenerate = true;
    return out;
  }
  out.value = std::exp(pairwise_sum(logs) / static_cast<double>(logs.size()));
  return out;
}

template <CircleFunction F>
std::vector<double> sample_modulus(const F& f, const Arc& arc, std::size_t count, const QuadraturePolicy& policy) {
  if (count < 2) throw ContractError("quadrature needs at least 2 samples");
  if (count > policy.max_count) limit_exceeded("quadrature sample count", count, policy.max_count);
  return sample_grid(GridSpec{arc, count, true}, [&](long double u) { return static_cast<double>(f.modulus(u)); });
}

}  // namespace detail

/// M_q for several exponents from one pair of sample sets (count and 2*count).
template <CircleFunction F>
std::vector<NormEstimate> mq_arc_multi(const F& f, const Arc& arc, std::span<const double> qs, std::size_t count = 0,
                                       const QuadraturePolicy& policy = {}) {
  for (double q : qs)
    if (!(q > 0.0) || !std::isfinite(q)) throw ContractError("M_q needs a finite q > 0");
  if (count == 0) count = default_sample_count(f.degree(), arc);
  const auto base = detail::sample_modulus(f, arc, count, policy);
  const auto fine = detail::sample_modulus(f, arc, 2 * count, policy);
  std::vector<NormEstimate> out;
  out.reserve(qs.size());
  for (double q : qs) {
    NormEstimate e;
    e.q = q;
    e.count = count;
    e.value = detail::power_mean(base, q);
    e.refined_value = detail::power_mean(fine, q);
    detail::finish(e, policy);
    out.push_back(std::move(e));
  }
  return out;
}

template <CircleFunction F>
NormEstimate mq_arc(const F& f, const Arc& arc, double q, std::size_t count = 0, const QuadraturePolicy& policy = {}) {
  const double qs[] = {q};
  return mq_arc_multi(f, arc, qs, count, policy).front();
}

/// Mahler measure M_0 on an arc. Samples with |S| below the underflow floor are
/// excluded; with exclusion_radius > 0, samples within that angular distance of a
/// detected near-zero (grid local minimum below near_zero_level * max) are dropped.
template <CircleFunction F>
NormEstimate mahler_arc(const F& f, const Arc& arc, std::size_t count = 0, double exclusion_radius = 0.0,
                        const QuadraturePolicy& policy = {}) {
  if (!(exclusion_radius >= 0.0)) throw ContractError("exclusion radius must be nonnegative");
  if (count == 0) count = default_sample_count(f.degree(), arc);
  const GridSpec base_grid{arc, count, true}, fine_grid{arc, 2 * count, true};
  const auto base = detail::log_mean(detail::sample_modulus(f, arc, count, policy), base_grid, exclusion_radius, policy);
  const auto fine =
      detail::log_mean(detail::sample_modulus(f, arc, 2 * count, policy), fine_grid, exclusion_radius, policy);
  NormEstimate e;
  e.q = 0.0;
  e.count = count;
  e.excluded = base.excluded + base.dropped;
  e.excluded_fraction = static_cast<double>(e.excluded) / static_cast<double>(count);
  e.dropped_measure = static_cast<double>(base.dropped) * base_grid.step();
  if (base.degenerate || fine.degenerate) {
    e.flagged = true;
    e.flag_reason = "degenerate: all samples excluded";
    return e;
  }
  e.value = base.value;
  e.refined_value = fine.value;
  detail::finish(e, policy);
  if (e.excluded_fraction > policy.max_excluded_fraction) {
    e.flagged = true;
    if (!e.flag_reason.empty()) e.flag_reason += "; ";
    e.flag_reason += "excluded fraction " + std::to_string(e.excluded_fraction) + " above limit";
  }
  return e;
}

/// M_q for each q of a strictly decreasing list, followed by the M_0 estimate.
template <CircleFunction F>
std::vector<NormEstimate> mq_limit_diagnostic(const F& f, const Arc& arc, std::span<const double> q_list,
                                              std::size_t count = 0, const QuadraturePolicy& policy = {}) {
  if (q_list.empty()) throw ContractError("q list is empty");
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    if (!(q_list[i] > 0.0)) throw ContractError("q list entries must be positive");
    if (i > 0 && !(q_list[i] < q_list[i - 1])) throw ContractError("q list must be strictly decreasing");
  }
  auto out = mq_arc_multi(f, arc, q_list, count, policy);
  out.push_back(mahler_arc(f, arc, count, 0.0, policy));
  return out;
}

/// True when the sequence (ordered by decreasing q) never increases by more than
/// the relative slack.
inline bool is_nonincreasing(std::span<const NormEstimate> seq, double slack) {
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i].value > seq[i - 1].value * (1.0 + slack)) return false;
  return true;
}

/// | |P_k|^2 - n | on the circle.
struct SquareDeviationFn {
  unsigned k;
  std::size_t degree() const { return (std::size_t{1} << k) - 1; }
  double modulus(long double u) const {
    PairValue v = detail::eval_pair_turn(k, u);
    return std::abs(std::norm(v.p) - static_cast<double>(std::size_t{1} << k));
  }
};

struct SquareDeviationMeasure {
  unsigned k;
  NormEstimate estimate;  // exp of the mean of log||P_k|^2 - n| over the full circle
  double ratio;           // estimate.value / sqrt(n)
};

inline SquareDeviationMeasure problem_5_5_quantity(unsigned k, std::size_t count = 0,
                                                   const QuadraturePolicy& policy = {}) {
  SquareDeviationFn f{k};
  NormEstimate e = mahler_arc(f, Arc::full(), count, 0.0, policy);
  return {k, e, e.value / std::sqrt(static_cast<double>(std::size_t{1} << k))};
}

}  // namespace rsp

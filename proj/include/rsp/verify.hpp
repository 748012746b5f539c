#pragma once

// Executable forms of the lower/upper bounds for P_k, Q_k on subarcs and of
// the finite-k experiments around the asymptotic results.
//
// Proved inequalities produce gated reports (passed must be true); experiments
// produce ungated reports whose `passed` only says the quadrature converged.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsp/arc.hpp"
#include "rsp/core.hpp"
#include "rsp/eval.hpp"
#include "rsp/norms.hpp"
#include "rsp/parallel.hpp"

namespace rsp {

/// gamma = sin^2(pi/8).
inline const double kGamma = [] {
  const double s = std::sin(std::numbers::pi / 8.0);
  return s * s;
}();

/// sqrt(2/e), the limit of M_0(P_k, [0, 2pi]) / sqrt(n).
inline const double kMahlerLimit = std::sqrt(2.0 / std::numbers::e);

struct InequalityReport {
  std::string name;
  unsigned k = 0;
  std::optional<Arc> arc;
  std::optional<double> q;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool passed = false;
  bool gated = true;
  std::vector<std::pair<std::string, double>> extras;
  std::string note;

  void add(std::string key, double value) { extras.emplace_back(std::move(key), value); }
  std::optional<double> extra(const std::string& key) const {
    for (const auto& [k, v] : extras)
      if (k == key) return v;
    return std::nullopt;
  }
};

namespace detail {

inline std::size_t order_size(unsigned k) {
  if (k > kDefaultMaxOrder) limit_exceeded("Rudin-Shapiro order k =", k, kDefaultMaxOrder);
  return std::size_t{1} << k;
}

/// Shortest arc for which the subarc bounds are asserted.
inline double min_arc_length(std::size_t n) { return 32.0 * std::numbers::pi / static_cast<double>(n); }

inline void require_long_arc(const Arc& arc, std::size_t n, const char* check) {
  const double need = min_arc_length(n);
  if (arc.length() < need * (1.0 - 1e-12))
    throw ContractError(std::string(check) + ": arc length " + std::to_string(arc.length()) +
                        " is below the hypothesis 32*pi/n = " + std::to_string(need));
}

struct SquaredModuli {
  std::vector<double> p, q;
};

inline SquaredModuli squared_moduli(unsigned k, const GridSpec& grid) {
  SquaredModuli out{std::vector<double>(grid.count), std::vector<double>(grid.count)};
  parallel_for(grid.count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      PairValue v = eval_pair_turn(k, grid.turn(j));
      out.p[j] = std::norm(v.p);
      out.q[j] = std::norm(v.q);
    }
  });
  return out;
}

}  // namespace detail

/// max(|P_k(z_j)|^2, |P_k(z_{j+r})|^2) >= 2 gamma n for even j, r = +-1, at the
/// n-th roots of unity; same for Q_k. Reports the worst such maximum.
inline InequalityReport check_lemma_3_1(unsigned k) {
  if (k < 1) throw ContractError("lemma 3.1 check needs k >= 1");
  const std::size_t n = detail::order_size(k);
  const auto vals = detail::squared_moduli(k, GridSpec{Arc::full(), n, false});
  const double bound = 2.0 * kGamma * static_cast<double>(n);
  auto worst_of = [&](const std::vector<double>& v) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; j += 2)
      for (std::size_t nb : {(j + 1) % n, (j + n - 1) % n}) worst = std::min(worst, std::max(v[j], v[nb]));
    return worst;
  };
  const double wp = worst_of(vals.p), wq = worst_of(vals.q);
  InequalityReport r;
  r.name = "lemma_3_1";
  r.k = k;
  r.lhs = std::min(wp, wq);
  r.rhs = bound;
  r.margin = r.lhs - r.rhs;
  r.passed = r.margin >= 0.0;
  r.add("worst_p", wp);
  r.add("worst_q", wq);
  return r;
}

/// |P_k|^2 >= gamma n on [t_j - gamma/n, t_j + gamma/n] around every lattice
/// point with |P_k(z_j)|^2 >= 2 gamma n (33 samples per interval); same for Q_k.
inline InequalityReport check_lemma_3_2(unsigned k, std::size_t samples_per_interval = 33) {
  if (k < 1) throw ContractError("lemma 3.2 check needs k >= 1");
  if (samples_per_interval < 2) throw ContractError("need at least 2 samples per interval");
  const std::size_t n = detail::order_size(k);
  const double nd = static_cast<double>(n);
  const auto lattice = detail::squared_moduli(k, GridSpec{Arc::full(), n, false});
  const double qualify = 2.0 * kGamma * nd;
  const long double half_width_turns = static_cast<long double>(kGamma / nd) / kTwoPiL;
  const std::size_t s = samples_per_interval;

  // Per lattice point: min over its interval of |P|^2 (or |Q|^2), +inf if not qualifying.
  std::vector<double> min_p(n), min_q(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const bool use_p = lattice.p[j] >= qualify, use_q = lattice.q[j] >= qualify;
      double mp = std::numeric_limits<double>::infinity(), mq = mp;
      if (use_p || use_q) {
        const long double center = static_cast<long double>(j) / static_cast<long double>(n);
        for (std::size_t i = 0; i < s; ++i) {
          const long double offset = (-1.0L + 2.0L * static_cast<long double>(i) / static_cast<long double>(s - 1)) *
                                     half_width_turns;
          PairValue v = detail::eval_pair_turn(k, center + offset);
          if (use_p) mp = std::min(mp, std::norm(v.p));
          if (use_q) mq = std::min(mq, std::norm(v.q));
        }
      }
      min_p[j] = mp;
      min_q[j] = mq;
    }
  });
  const double wp = *std::min_element(min_p.begin(), min_p.end());
  const double wq = *std::min_element(min_q.begin(), min_q.end());
  std::size_t certified = 0;
  for (std::size_t j = 0; j < n; ++j) certified += (lattice.p[j] >= qualify) + (lattice.q[j] >= qualify);
  InequalityReport r;
  r.name = "lemma_3_2";
  r.k = k;
  r.lhs = std::min(wp, wq);
  r.rhs = kGamma * nd;
  r.margin = r.lhs - r.rhs;
  r.passed = r.margin >= 0.0;
  r.add("min_p", wp);
  r.add("min_q", wq);
  r.add("certified_intervals", static_cast<double>(certified));
  return r;
}

/// max |R'| <= ((n-1)/2) max R for R(t) = |P_k(e^{it})|^2 (and Q_k), a
/// nonnegative trigonometric polynomial of degree n-1. R' comes from the
/// differentiated recursion. lhs is the achieved ratio, rhs = 1 + 1e-9.
inline InequalityReport bernstein_ratio(unsigned k, std::size_t count = 0) {
  const std::size_t n = detail::order_size(k);
  if (count == 0) count = std::max<std::size_t>(16 * n, 16);
  if (count < 16 * n) throw ContractError("bernstein check needs count >= 16n");
  const GridSpec grid{Arc::full(), count, true};
  std::vector<double> rp(count), drp(count), rq(count), drq(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      PairJet jet = detail::eval_pair_jet_turn(k, grid.turn(j));
      rp[j] = std::norm(jet.p);
      rq[j] = std::norm(jet.q);
      drp[j] = std::abs(2.0 * (std::conj(jet.p) * jet.dp).real());
      drq[j] = std::abs(2.0 * (std::conj(jet.q) * jet.dq).real());
    }
  });
  const double factor = static_cast<double>(n - 1) / 2.0;
  auto ratio = [&](const std::vector<double>& r, const std::vector<double>& dr) {
    const double max_dr = *std::max_element(dr.begin(), dr.end());
    const double max_r = *std::max_element(r.begin(), r.end());
    if (max_dr == 0.0) return 0.0;
    return max_dr / (factor * max_r);
  };
  const double ratio_p = ratio(rp, drp), ratio_q = ratio(rq, drq);
  InequalityReport r;
  r.name = "bernstein";
  r.k = k;
  r.lhs = std::max(ratio_p, ratio_q);
  r.rhs = 1.0 + 1e-9;
  r.margin = r.rhs - r.lhs;
  r.passed = r.lhs <= r.rhs;
  r.add("ratio_p", ratio_p);
  r.add("ratio_q", ratio_q);
  r.add("count", static_cast<double>(count));
  return r;
}

/// m(E) >= (b-a) gamma / (4 pi) for E = {t in [a,b] : |P_k(e^{it})|^2 >= gamma n},
/// estimated with 64 samples per 1/n window; same for Q_k. The unsquared reading
/// |P_k| >= gamma n is reported alongside but not gated.
inline InequalityReport check_theorem_2_1(unsigned k, const Arc& arc) {
  const std::size_t n = detail::order_size(k);
  detail::require_long_arc(arc, n, "theorem 2.1 check");
  const double nd = static_cast<double>(n);
  const auto count = static_cast<std::size_t>(std::ceil(arc.length() * 64.0 * nd));
  const auto vals = detail::squared_moduli(k, GridSpec{arc, std::max<std::size_t>(count, 2), true});
  const double level = kGamma * nd;
  const double literal_level = level * level;  // |P| >= gamma n  <=>  |P|^2 >= (gamma n)^2
  auto measure = [&](const std::vector<double>& v, double lvl) {
    const auto hits = std::count_if(v.begin(), v.end(), [&](double x) { return x >= lvl; });
    return arc.length() * static_cast<double>(hits) / static_cast<double>(v.size());
  };
  const double mp = measure(vals.p, level), mq = measure(vals.q, level);
  const double bound = arc.length() * kGamma / (4.0 * std::numbers::pi);
  InequalityReport r;
  r.name = "theorem_2_1";
  r.k = k;
  r.arc = arc;
  r.lhs = std::min(mp, mq);
  r.rhs = bound;
  r.margin = r.lhs - r.rhs;
  r.passed = r.margin >= 0.0;
  r.add("measure_p", mp);
  r.add("measure_q", mq);
  const double lp = measure(vals.p, literal_level), lq = measure(vals.q, literal_level);
  r.add("literal_measure_p", lp);
  r.add("literal_measure_q", lq);
  r.add("literal_passed", (std::min(lp, lq) >= bound) ? 1.0 : 0.0);
  r.add("count", static_cast<double>(vals.p.size()));
  r.note = "gated on the squared-modulus set";
  return r;
}

/// (gamma/4pi)(gamma n)^{q/2} <= M_q(S,[a,b])^q <= (2n)^{q/2} for S = P_k, Q_k,
/// one report per q, all from the same sample sets.
inline std::vector<InequalityReport> check_theorem_2_2(unsigned k, const Arc& arc, std::span<const double> qs,
                                                       std::size_t count = 0) {
  const std::size_t n = detail::order_size(k);
  detail::require_long_arc(arc, n, "theorem 2.2 check");
  const double nd = static_cast<double>(n);
  const auto est_p = mq_arc_multi(PairComponentFn{k, Component::P}, arc, qs, count);
  const auto est_q = mq_arc_multi(PairComponentFn{k, Component::Q}, arc, qs, count);
  std::vector<InequalityReport> out;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double q = qs[i];
    const double vp = std::pow(est_p[i].value, q), vq = std::pow(est_q[i].value, q);
    const double lower = kGamma / (4.0 * std::numbers::pi) * std::pow(kGamma * nd, q / 2.0);
    const double upper = std::pow(2.0 * nd, q / 2.0);
    const double lo = std::min(vp, vq), hi = std::max(vp, vq);
    InequalityReport r;
    r.name = "theorem_2_2";
    r.k = k;
    r.arc = arc;
    r.q = q;
    r.lhs = lo;
    r.rhs = lower;
    r.margin = std::min((lo - lower) / lower, (upper * (1.0 + 1e-9) - hi) / upper);
    r.passed = lo >= lower && hi <= upper * (1.0 + 1e-9);
    r.add("value_p", vp);
    r.add("value_q", vq);
    r.add("lower_bound", lower);
    r.add("upper_bound", upper);
    r.add("rel_step", std::max(est_p[i].rel_step, est_q[i].rel_step));
    r.add("flagged", (est_p[i].flagged || est_q[i].flagged) ? 1.0 : 0.0);
    r.add("count", static_cast<double>(est_p[i].count));
    out.push_back(std::move(r));
  }
  return out;
}

inline InequalityReport check_theorem_2_2(unsigned k, const Arc& arc, double q, std::size_t count = 0) {
  const double qs[] = {q};
  return check_theorem_2_2(k, arc, qs, count).front();
}

/// M_q(P_k, full) / [ (2n)^{1/2} (q/2+1)^{-1/q} ] and |M_q(P_k) - M_q(Q_k)|. Ungated.
inline InequalityReport saffari_ratio(unsigned k, double q, std::size_t count = 0) {
  const std::size_t n = detail::order_size(k);
  const Arc full = Arc::full();
  const NormEstimate ep = mq_arc(PairComponentFn{k, Component::P}, full, q, count);
  const NormEstimate eq = mq_arc(PairComponentFn{k, Component::Q}, full, q, count);
  const double predicted = std::sqrt(2.0 * static_cast<double>(n)) / std::pow(q / 2.0 + 1.0, 1.0 / q);
  InequalityReport r;
  r.name = "saffari";
  r.k = k;
  r.arc = full;
  r.q = q;
  r.gated = false;
  r.lhs = ep.value / predicted;
  r.rhs = 1.0;
  r.margin = std::abs(r.lhs - 1.0);
  r.passed = !(ep.flagged || eq.flagged);
  r.add("mq_p", ep.value);
  r.add("mq_q", eq.value);
  r.add("ratio_q", eq.value / predicted);
  r.add("pq_discrepancy", std::abs(ep.value - eq.value));
  r.add("rel_step", std::max(ep.rel_step, eq.rel_step));
  r.add("refined_ratio", ep.refined_value / predicted);
  r.add("count", static_cast<double>(ep.count));
  return r;
}

/// M_0(S, full) / sqrt(n) for S = P_k, Q_k against sqrt(2/e). Ungated.
inline InequalityReport mahler_asymptote_ratio(unsigned k, std::size_t count = 0) {
  if (k < 4) throw ContractError("mahler asymptote experiment needs k >= 4");
  const std::size_t n = detail::order_size(k);
  const double root_n = std::sqrt(static_cast<double>(n));
  const NormEstimate ep = mahler_arc(PairComponentFn{k, Component::P}, Arc::full(), count);
  const NormEstimate eq = mahler_arc(PairComponentFn{k, Component::Q}, Arc::full(), count);
  InequalityReport r;
  r.name = "mahler_asymptote";
  r.k = k;
  r.arc = Arc::full();
  r.q = 0.0;
  r.gated = false;
  r.lhs = ep.value / root_n;
  r.rhs = kMahlerLimit;
  r.margin = std::abs(r.lhs - r.rhs);
  r.passed = !(ep.flagged || eq.flagged);
  r.add("ratio_q", eq.value / root_n);
  r.add("rel_step", std::max(ep.rel_step, eq.rel_step));
  r.add("count", static_cast<double>(ep.count));
  return r;
}

/// M_0(S, [a,b]) / sqrt(n) for S = P_k, Q_k on an arc of length >= 32 pi / n,
/// tagged with whether the arc reaches the (log n)^{3/2} / n^{1/2} regime. Ungated.
inline InequalityReport theorem_1_3_experiment(unsigned k, const Arc& arc, std::size_t count = 0) {
  const std::size_t n = detail::order_size(k);
  detail::require_long_arc(arc, n, "theorem 1.3 experiment");
  const double nd = static_cast<double>(n);
  const NormEstimate ep = mahler_arc(PairComponentFn{k, Component::P}, arc, count);
  const NormEstimate eq = mahler_arc(PairComponentFn{k, Component::Q}, arc, count);
  const double regime = std::pow(std::log(nd), 1.5) / std::sqrt(nd);
  InequalityReport r;
  r.name = "theorem_1_3";
  r.k = k;
  r.arc = arc;
  r.q = 0.0;
  r.gated = false;
  r.lhs = std::min(ep.value, eq.value) / std::sqrt(nd);
  r.rhs = 0.0;
  r.margin = r.lhs;
  r.passed = !(ep.flagged || eq.flagged);
  r.add("ratio_p", ep.value / std::sqrt(nd));
  r.add("ratio_q", eq.value / std::sqrt(nd));
  r.add("regime_length", regime);
  r.add("in_proved_regime", arc.length() >= regime ? 1.0 : 0.0);
  r.add("rel_step", std::max(ep.rel_step, eq.rel_step));
  return r;
}

struct Rectangle {
  double x0, x1, y0, y1;
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

struct RectangleTest {
  Rectangle rect;
  double empirical_measure;  // m({t : P_k(e^{it}) / sqrt(2n) in E})
  double expected;           // 2 m(E)
};

struct IntervalTest {
  double lo, hi;
  double empirical_measure;  // m({t : |P_k(e^{it})|^2 / (2n) in [lo, hi]})
  double expected;           // 2 pi (hi - lo)
};

struct DistributionReport {
  unsigned k = 0;
  std::size_t bins = 0;
  std::size_t count = 0;
  std::vector<double> empirical_cdf;  // fraction of samples with |P|^2/(2n) <= (b+1)/bins
  double sup_distance_to_uniform = 0.0;
  std::vector<RectangleTest> rectangle_tests;
  std::vector<IntervalTest> interval_tests;
};

/// Distribution of P_k(e^{it}) / sqrt(2n) over >= 64n half-offset samples.
inline DistributionReport value_distribution(unsigned k, std::size_t bins, std::span<const Rectangle> rectangles,
                                             std::span<const std::pair<double, double>> intervals = {},
                                             std::size_t count = 0) {
  if (bins < 2) throw ContractError("distribution needs at least 2 bins");
  for (const auto& e : rectangles) {
    if (!(e.x0 < e.x1 && e.y0 < e.y1)) throw ContractError("degenerate rectangle");
    for (double x : {e.x0, e.x1})
      for (double y : {e.y0, e.y1})
        if (x * x + y * y >= 1.0) throw ContractError("rectangle must lie in the open unit disk");
  }
  const std::size_t n = detail::order_size(k);
  if (count == 0) count = 64 * n;
  if (count < 2) throw ContractError("distribution needs at least 2 samples");
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  const GridSpec grid{Arc::full(), count, true};
  std::vector<double> re(count), im(count), x(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      PairValue v = detail::eval_pair_turn(k, grid.turn(j));
      re[j] = v.p.real() * scale;
      im[j] = v.p.imag() * scale;
      x[j] = re[j] * re[j] + im[j] * im[j];
    }
  });
  DistributionReport rep;
  rep.k = k;
  rep.bins = bins;
  rep.count = count;
  const double total = static_cast<double>(count);

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  double sup = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = std::clamp(sorted[i], 0.0, 1.0);
    sup = std::max({sup, static_cast<double>(i + 1) / total - u, u - static_cast<double>(i) / total});
  }
  rep.sup_distance_to_uniform = sup;

  rep.empirical_cdf.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double edge = static_cast<double>(b + 1) / static_cast<double>(bins);
    auto it = (b + 1 == bins) ? sorted.end() : std::upper_bound(sorted.begin(), sorted.end(), edge);
    rep.empirical_cdf[b] = static_cast<double>(it - sorted.begin()) / total;
  }

  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& e : rectangles) {
    std::size_t hits = 0;
    for (std::size_t j = 0; j < count; ++j) hits += e.contains(re[j], im[j]) ? 1 : 0;
    rep.rectangle_tests.push_back({e, two_pi * static_cast<double>(hits) / total, 2.0 * e.area()});
  }
  for (const auto& [lo, hi] : intervals) {
    if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw ContractError("value interval must satisfy 0 <= lo < hi <= 1");
    auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
    auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
    rep.interval_tests.push_back({lo, hi, two_pi * static_cast<double>(last - first) / total, two_pi * (hi - lo)});
  }
  return rep;
}

/// Arcs for the subarc checks: lengths uniform in [32 pi / n, 2 pi], start
/// uniform in [0, 2 pi). Empty when 32 pi / n > 2 pi.
inline std::vector<Arc> random_long_arcs(unsigned k, std::size_t how_many, std::mt19937_64& rng) {
  const std::size_t n = detail::order_size(k);
  const double lmin = detail::min_arc_length(n);
  std::vector<Arc> arcs;
  if (lmin > kTwoPi * (1.0 + 1e-12)) return arcs;
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (std::size_t i = 0; i < how_many; ++i) {
    const double len = lmin + (kTwoPi - lmin) * u01();
    const double alpha = kTwoPi * u01();
    if (len >= kTwoPi) {
      arcs.push_back(Arc::full());
      continue;
    }
    double beta = alpha + len;
    if (beta - alpha > kTwoPi) beta = std::nextafter(beta, alpha);
    arcs.emplace_back(alpha, beta);
  }
  return arcs;
}

}  // namespace rsp

#pragma once

// Evaluation of P_k, Q_k on the unit circle.
//
// Points are carried as a fraction u of the full turn (long double). The
// power z^{2^j} has turn fraction frac(2^j u), and doubling a binary fraction
// is exact, so every power is computed from its own exactly reduced angle and
// carries a single rounding. The recursion then costs O(k) per point.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "rsp/arc.hpp"
#include "rsp/binary_io.hpp"
#include "rsp/core.hpp"
#include "rsp/error.hpp"
#include "rsp/parallel.hpp"

namespace rsp {

/// Point e^{i theta} of the unit circle, theta reduced to [0, 2*pi).
class CirclePoint {
 public:
  static CirclePoint from_theta(double theta) {
    if (!std::isfinite(theta)) throw ContractError("angle must be finite");
    long double t = std::fmod(static_cast<long double>(theta), kTwoPiL);
    if (t < 0) t += kTwoPiL;
    return from_turn(t / kTwoPiL);
  }
  /// Point with turn fraction u (reduced mod 1); lattice points j/n are exact.
  static CirclePoint from_turn(long double u) {
    u -= std::floor(u);
    if (u >= 1.0L) u = 0.0L;
    return CirclePoint(u);
  }

  long double turn() const noexcept { return turn_; }
  double theta() const noexcept {
    double t = static_cast<double>(kTwoPiL * turn_);
    return t < kTwoPi ? t : 0.0;
  }

 private:
  explicit CirclePoint(long double u) : turn_(u) {}
  long double turn_;
};

struct PairValue {
  std::complex<double> p;
  std::complex<double> q;
};

/// Values and t-derivatives of t -> P_k(e^{it}), Q_k(e^{it}).
struct PairJet {
  std::complex<double> p, q, dp, dq;
};

namespace detail {

struct Cplx {
  double re, im;
};

inline Cplx mul(Cplx a, Cplx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

// Advances a binary turn fraction from 2^j u to 2^{j+1} u (mod 1); exact.
inline long double double_turn(long double frac) {
  frac *= 2;
  return frac >= 1.0L ? frac - 1.0L : frac;
}

inline Cplx unit(long double frac) {
  double angle = static_cast<double>(kTwoPiL * frac);
  return {std::cos(angle), std::sin(angle)};
}

inline PairValue eval_pair_turn(unsigned k, long double u) {
  Cplx P{1.0, 0.0}, Q{1.0, 0.0};
  long double frac = u - std::floor(u);
  for (unsigned j = 0; j < k; ++j) {
    Cplx wq = mul(unit(frac), Q);
    Q = {P.re - wq.re, P.im - wq.im};
    P = {P.re + wq.re, P.im + wq.im};
    frac = double_turn(frac);
  }
  return {{P.re, P.im}, {Q.re, Q.im}};
}

inline PairJet eval_pair_jet_turn(unsigned k, long double u) {
  Cplx P{1.0, 0.0}, Q{1.0, 0.0}, dP{0.0, 0.0}, dQ{0.0, 0.0};
  long double frac = u - std::floor(u);
  double scale = 1.0;  // 2^j
  for (unsigned j = 0; j < k; ++j) {
    Cplx w = unit(frac);
    Cplx wq = mul(w, Q);
    // d/dt (w Q) = i 2^j w Q + w Q'
    Cplx wdq = mul(w, dQ);
    Cplx dwq{-scale * wq.im + wdq.re, scale * wq.re + wdq.im};
    Q = {P.re - wq.re, P.im - wq.im};
    P = {P.re + wq.re, P.im + wq.im};
    dQ = {dP.re - dwq.re, dP.im - dwq.im};
    dP = {dP.re + dwq.re, dP.im + dwq.im};
    frac = double_turn(frac);
    scale *= 2.0;
  }
  return {{P.re, P.im}, {Q.re, Q.im}, {dP.re, dP.im}, {dQ.re, dQ.im}};
}

}  // namespace detail

/// (P_k(z), Q_k(z)) by the doubling recursion, O(k) operations.
inline PairValue eval_pair_point(const RudinShapiroPair& pair, CirclePoint point) {
  return detail::eval_pair_turn(pair.k, point.turn());
}

inline PairJet eval_pair_jet(const RudinShapiroPair& pair, CirclePoint point) {
  return detail::eval_pair_jet_turn(pair.k, point.turn());
}

/// Degree limit for the O(n) nested-multiplication evaluator.
inline constexpr std::size_t kHornerMaxDegree = std::size_t{1} << 20;

/// Nested multiplication in extended precision. Serves as the independent
/// oracle for eval_pair_point and as the evaluator for arbitrary Littlewood input.
inline std::complex<double> eval_horner(const LittlewoodPolynomial& poly, CirclePoint point) {
  if (poly.degree() > kHornerMaxDegree) detail::limit_exceeded("Horner degree", poly.degree(), kHornerMaxDegree);
  const long double angle = kTwoPiL * point.turn();
  const long double zr = std::cos(angle), zi = std::sin(angle);
  long double ar = 0.0L, ai = 0.0L;
  auto c = poly.coeffs();
  for (std::size_t j = c.size(); j-- > 0;) {
    long double nr = ar * zr - ai * zi + c[j];
    ai = ar * zi + ai * zr;
    ar = nr;
  }
  return {static_cast<double>(ar), static_cast<double>(ai)};
}

/// Sample j of a uniform grid on an arc sits at turn
///   start + (j + offset/2) * span / count
/// where offset is 1 for the default half-step grid and 0 for the full lattice.
struct GridSpec {
  Arc arc;
  std::size_t count;
  bool half_offset = true;

  long double turn(std::size_t j) const {
    long double step2 = static_cast<long double>(2 * j + (half_offset ? 1 : 0));
    return arc.start_turn() + step2 * arc.turns() / static_cast<long double>(2 * count);
  }
  double theta(std::size_t j) const {
    return arc.alpha() + (static_cast<double>(j) + (half_offset ? 0.5 : 0.0)) * (arc.length() / count);
  }
  /// Angular spacing.
  double step() const { return arc.length() / static_cast<double>(count); }
};

inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 24;

struct GridSamples {
  unsigned k = 0;
  GridSpec spec;
  std::vector<std::complex<double>> values_p;
  std::vector<std::complex<double>> values_q;

  std::size_t count() const { return spec.count; }
  const Arc& arc() const { return spec.arc; }
};

/// Values of f(turn) on every grid node, filled in parallel, ordered by node.
template <class F>
std::vector<double> sample_grid(const GridSpec& grid, F&& f) {
  std::vector<double> out(grid.count);
  parallel_for(grid.count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) out[j] = f(grid.turn(j));
  });
  return out;
}

inline GridSamples eval_grid(const RudinShapiroPair& pair, const Arc& arc, std::size_t count,
                             bool half_offset = true, std::size_t max_count = kDefaultGridCap) {
  if (count < 2) throw ContractError("grid needs at least 2 samples");
  if (count > max_count) detail::limit_exceeded("grid sample count", count, max_count);
  GridSamples g{pair.k, GridSpec{arc, count, half_offset}, {}, {}};
  g.values_p.resize(count);
  g.values_q.resize(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      PairValue v = detail::eval_pair_turn(pair.k, g.spec.turn(j));
      g.values_p[j] = v.p;
      g.values_q[j] = v.q;
    }
  });
  return g;
}

// Binary sample dump: "RSGRID", u32 k, f64 alpha, f64 beta, u64 count,
// u8 half_offset, then per sample f64 P.re, P.im, Q.re, Q.im. Little-endian.
inline constexpr char kGridMagic[] = "RSGRID";

inline void write_grid_dump(std::ostream& os, const GridSamples& g) {
  io::write_magic(os, kGridMagic);
  io::write_le<std::uint32_t>(os, g.k);
  io::write_le<double>(os, g.arc().alpha());
  io::write_le<double>(os, g.arc().beta());
  io::write_le<std::uint64_t>(os, g.count());
  io::write_le<std::uint8_t>(os, g.spec.half_offset ? 1 : 0);
  for (std::size_t j = 0; j < g.count(); ++j) {
    io::write_le(os, g.values_p[j].real());
    io::write_le(os, g.values_p[j].imag());
    io::write_le(os, g.values_q[j].real());
    io::write_le(os, g.values_q[j].imag());
  }
}

inline GridSamples read_grid_dump(std::istream& is, std::size_t max_count = kDefaultGridCap) {
  io::expect_magic(is, kGridMagic);
  unsigned k = io::read_le<std::uint32_t>(is);
  double alpha = io::read_le<double>(is);
  double beta = io::read_le<double>(is);
  auto count = io::read_le<std::uint64_t>(is);
  bool half = io::read_le<std::uint8_t>(is) != 0;
  if (count > max_count) detail::limit_exceeded("grid sample count", count, max_count);
  GridSamples g{k, GridSpec{Arc(alpha, beta), static_cast<std::size_t>(count), half}, {}, {}};
  g.values_p.resize(count);
  g.values_q.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    double pr = io::read_le<double>(is), pi = io::read_le<double>(is);
    double qr = io::read_le<double>(is), qi = io::read_le<double>(is);
    g.values_p[j] = {pr, pi};
    g.values_q[j] = {qr, qi};
  }
  return g;
}

}  // namespace rsp

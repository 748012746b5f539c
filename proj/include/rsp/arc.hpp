#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "rsp/error.hpp"

namespace rsp {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

/// Subarc [alpha, beta] of the unit circle, angles in radians.
class Arc {
 public:
  Arc(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
      throw ContractError("arc endpoints must be finite");
    if (!(alpha < beta)) throw ContractError("arc needs alpha < beta");
    if (beta - alpha > kTwoPi) throw ContractError("arc longer than 2*pi");
  }

  static Arc full() { return Arc(0.0, kTwoPi); }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double length() const noexcept { return beta_ - alpha_; }

  /// Length as a fraction of the full turn; exactly 1 when beta - alpha is
  /// the double nearest 2*pi.
  long double turns() const noexcept {
    if (is_full_circle()) return 1.0L;
    return static_cast<long double>(beta_ - alpha_) / kTwoPiL;
  }
  long double start_turn() const noexcept { return static_cast<long double>(alpha_) / kTwoPiL; }
  bool is_full_circle() const noexcept { return beta_ - alpha_ == kTwoPi; }

  std::string to_string() const { return std::to_string(alpha_) + ":" + std::to_string(beta_); }

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  double alpha_;
  double beta_;
};

}  // namespace rsp

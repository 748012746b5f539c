#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsp/arc.hpp"

namespace rsp::cli {

enum ExitStatus : int {
  kPass = 0,
  kGatedFailure = 1,
  kUsage = 2,
  kResourceLimit = 3,
};

inline constexpr std::uint64_t kDefaultSeed = 20231;

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a..b" or a single integer.
std::vector<unsigned> parse_k_range(const std::string& text);
/// Radians, with "pi" sugar: "pi", "2pi", "-pi/2", "3*pi/4", "1.5".
double parse_angle(const std::string& text);
/// "alpha:beta".
Arc parse_arc(const std::string& text);
/// Comma-separated reals.
std::vector<double> parse_real_list(const std::string& text);
/// Comma-separated integers.
std::vector<long long> parse_integer_list(const std::string& text);
/// "auto" (0) or a positive count.
unsigned parse_threads(const std::string& text);

}  // namespace rsp::cli

#pragma once

// Coefficient cache: one file per order k,
//   "RSPAIR", u16 version, u32 k, then 2^k signed bytes of P_k and 2^k of Q_k.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "rsp/binary_io.hpp"
#include "rsp/core.hpp"

namespace rsp {

inline constexpr char kPairMagic[] = "RSPAIR";
inline constexpr std::uint16_t kPairCacheVersion = 1;

/// Environment variable naming the default cache directory.
inline constexpr char kCacheDirEnv[] = "RSP_CACHE_DIR";

inline void write_pair(std::ostream& os, const RudinShapiroPair& pair) {
  io::write_magic(os, kPairMagic);
  io::write_le<std::uint16_t>(os, kPairCacheVersion);
  io::write_le<std::uint32_t>(os, pair.k);
  auto put = [&](const LittlewoodPolynomial& poly) {
    os.write(reinterpret_cast<const char*>(poly.coeffs().data()), static_cast<std::streamsize>(poly.size()));
  };
  put(pair.p);
  put(pair.q);
}

inline RudinShapiroPair read_pair(std::istream& is, unsigned max_order = kDefaultMaxOrder) {
  io::expect_magic(is, kPairMagic);
  auto version = io::read_le<std::uint16_t>(is);
  if (version != kPairCacheVersion) throw io::FormatError("unsupported RSPAIR version " + std::to_string(version));
  unsigned k = io::read_le<std::uint32_t>(is);
  if (k > max_order) detail::limit_exceeded("cached order k =", k, max_order);
  std::size_t n = std::size_t{1} << k;
  auto get = [&] {
    std::vector<Coefficient> c(n);
    if (!is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(n)))
      throw io::FormatError("truncated RSPAIR payload");
    for (std::size_t j = 0; j < n; ++j)
      if (c[j] != 1 && c[j] != -1)
        throw io::FormatError("RSPAIR coefficient " + std::to_string(j) + " is not +1 or -1");
    return LittlewoodPolynomial(std::move(c));
  };
  LittlewoodPolynomial p = get();
  LittlewoodPolynomial q = get();
  return {k, n, std::move(p), std::move(q)};
}

/// Directory-backed store of generated pairs.
class PairCache {
 public:
  explicit PairCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// Cache rooted at $RSP_CACHE_DIR, if set and non-empty.
  static std::optional<PairCache> from_environment() {
    const char* env = std::getenv(kCacheDirEnv);
    if (env == nullptr || *env == '\0') return std::nullopt;
    return PairCache(env);
  }

  std::filesystem::path path_for(unsigned k) const { return dir_ / ("rspair_k" + std::to_string(k) + ".bin"); }

  std::optional<RudinShapiroPair> load(unsigned k, unsigned max_order = kDefaultMaxOrder) const {
    std::ifstream in(path_for(k), std::ios::binary);
    if (!in) return std::nullopt;
    RudinShapiroPair pair = read_pair(in, max_order);
    if (pair.k != k) throw io::FormatError("cache file for k=" + std::to_string(k) + " holds k=" + std::to_string(pair.k));
    return pair;
  }

  void store(const RudinShapiroPair& pair) const {
    std::filesystem::create_directories(dir_);
    auto target = path_for(pair.k);
    auto tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      write_pair(out, pair);
      if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
  }

  /// Cached pair if present, else generated and stored.
  RudinShapiroPair get_or_generate(unsigned k, unsigned max_order = kDefaultMaxOrder) const {
    if (k > max_order) detail::limit_exceeded("Rudin-Shapiro order k =", k, max_order);
    if (auto hit = load(k, max_order)) return std::move(*hit);
    RudinShapiroPair pair = generate_pair(k, max_order);
    store(pair);
    return pair;
  }

  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace rsp

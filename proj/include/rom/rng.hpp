#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rom {

// Counter-based random stream. Every draw is a pure function of
// (key, counter), so a stream can be split into independent child
// streams without sharing state. Parallel trial loops derive one
// child stream per trial index and stay deterministic regardless of
// the worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed + kKeyOffset)) {}

  // Independent child stream; the parent is not advanced.
  [[nodiscard]] Rng split(std::uint64_t id) const {
    Rng child;
    child.key_ = mix(key_ ^ mix(id + kSplitOffset));
    return child;
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_open_double() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the spare is cached per stream.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_open_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  Rng() = default;

  // splitmix64 finalizer
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  static constexpr std::uint64_t kKeyOffset = 0x8764000b2e14b383ull;
  static constexpr std::uint64_t kSplitOffset = 0x9e8f1294c1f4a205ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rom

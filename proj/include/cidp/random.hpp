#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string_view>

namespace cidp {

/// Counter-based deterministic stream.
///
/// Draw i of a stream with key k is SplitMix64's output function applied to
/// k + (i + 1) * 0x9E3779B97F4A7C15, i.e. exactly the i-th output of a
/// SplitMix64 generator seeded with k. The key is derived from
/// (seed, label, replication) by FNV-1a over the label and SplitMix64 mixing,
/// so streams with different labels or replications never share state and
/// any draw can be addressed directly by its counter.
///
/// Satisfies UniformRandomBitGenerator, so <random> distributions accept it.
class RandomStream {
public:
  using result_type = std::uint64_t;

  RandomStream() = default;
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return at(counter_++); }

  /// Draw number `index` without touching the running counter.
  result_type at(std::uint64_t index) const;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return to_unit((*this)()); }
  double uniform_at(std::uint64_t index) const { return to_unit(at(index)); }

  /// Standard normal by Box-Muller (consumes two draws).
  double normal();

  /// Circularly-symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal();

  /// Complex normal built from draws `index` and `index + 1`.
  std::complex<double> complex_normal_at(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static double to_unit(result_type bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view text);

/// Stream for one concern ("arrivals", "fading", ...) of one replication.
RandomStream make_rng(std::uint64_t seed, std::string_view stream_label,
                      std::uint64_t replication = 0);

} // namespace cidp

#include "cidp/random.hpp"

#include <cmath>
#include <numbers>

namespace cidp {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream::result_type RandomStream::at(std::uint64_t index) const {
  return splitmix64_mix(key_ + (index + 1) * kGolden);
}

double RandomStream::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> RandomStream::complex_normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1)); // E r^2 = 1
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::complex<double> RandomStream::complex_normal_at(std::uint64_t index) const {
  const double u1 = 1.0 - uniform_at(index);
  const double u2 = uniform_at(index + 1);
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

RandomStream make_rng(std::uint64_t seed, std::string_view stream_label,
                      std::uint64_t replication) {
  std::uint64_t key = splitmix64_mix(seed + kGolden);
  key = splitmix64_mix(key ^ fnv1a64(stream_label));
  key = splitmix64_mix(key + (replication + 1) * kGolden);
  return RandomStream(key);
}

} // namespace cidp

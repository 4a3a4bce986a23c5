#pragma once

// Deterministic random numbers. mt19937_64 is bit-stable across platforms;
// the distributions here are hand-rolled (std::uniform_real_distribution and
// friends are not guaranteed to produce identical streams across standard
// library implementations, and byte-identical reruns are a hard contract).

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace zklab {

// 64-bit FNV-1a. Used for seed derivation and for content hashes of output
// files (see io.hpp).
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a(s.data(), s.size(), h);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stream splitting: derive independent per-task seeds from a base seed, a
// human-readable tag, and indices. Collisions between distinct (tag, i, j)
// are as unlikely as 64-bit hash collisions.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t i = 0, std::uint64_t j = 0) {
  std::uint64_t h = fnv1a(tag, base ^ 0x243f6a8885a308d3ull);
  h = splitmix64(h ^ splitmix64(i));
  return splitmix64(h ^ (j * 0x9e3779b97f4a7c15ull + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Inclusive integer range.
  long long uniform_int(long long lo, long long hi) {
    const auto span = static_cast<unsigned long long>(hi - lo) + 1ull;
    return lo + static_cast<long long>(eng_() % span);
  }

  // Box-Muller, standard normal. The cached spare keeps the stream cheap.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // u1 = 0 would take log(0); nudge to the smallest representable draw
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Standard complex gaussian, E|z|^2 = 1.
  std::complex<double> gaussian_c() {
    const double re = normal();
    const double im = normal();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace zklab

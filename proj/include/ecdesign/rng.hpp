#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>

#include "ecdesign/numerics.hpp"

namespace ecdesign {

using BigInt = mpz_class;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// One master seed feeds several independent streams. Noise draws and crypto
// draws never share a stream, so plain and encrypted runs of the same seed
// see identical process noise.
enum class Stream : std::uint64_t {
  noise = 1,
  crypto = 2,
  initial_state = 3,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream) {
  return splitmix64(master ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ull));
}

/// Deterministic Gaussian source. Box-Muller on explicit 53-bit uniforms, so
/// two runs with the same seed agree bit for bit on every platform.
class NoiseRng {
 public:
  explicit NoiseRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Deterministic big-integer source for key material and encryption nonces.
class CryptoRng {
 public:
  explicit CryptoRng(std::uint64_t seed) : engine_(seed) {}

  /// Exactly `bits` random bits (top bit left free).
  BigInt random_bits(unsigned bits) {
    if (bits == 0) return BigInt(0);
    const unsigned words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    for (auto& w : buf) w = engine_();
    BigInt v;
    mpz_import(v.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    BigInt masked;
    mpz_fdiv_r_2exp(masked.get_mpz_t(), v.get_mpz_t(), bits);
    return masked;
  }

  /// Uniform draw from [0, bound) by rejection on bit-length(bound) draws.
  BigInt uniform_below(const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
    while (true) {
      BigInt v = random_bits(bits);
      if (v < bound) return v;
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ecdesign

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ecdesign {

struct OpTiming {
  unsigned key_bits = 0;
  std::string op;  // "Enc" | "Dec" | "TK" | "TC"
  int trials = 0;
  double min_ms = 0.0;
  double mean_ms = 0.0;
  double max_ms = 0.0;
  double std_ms = 0.0;
};

/// Wall-clock statistics for the four online primitives at one key size.
std::vector<OpTiming> bench_crypto(unsigned key_bits, int trials, std::uint64_t seed);

}  // namespace ecdesign

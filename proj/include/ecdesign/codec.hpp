#pragma once

#include "ecdesign/elgamal.hpp"

namespace ecdesign {

// Real <-> plaintext codec. Encoding maps x to the group element nearest to
// x/delta + p*[x<0] (ties to the smaller element); decoding maps m back to
// delta*(m - p*[m>q]). The round-trip error is bounded by delta*d_max/2 where
// d_max is the largest gap between consecutive group elements, read
// cyclically (the run past the largest residue wraps around to the smallest
// one); nearest-element distances wrap the same way, which is what makes the
// bound hold for targets inside the boundary run.

struct Sensitivity {
  double delta;  // quantization step, > 0
};

struct GroupGapBound {
  unsigned long d_max;  // >= 1
  bool exact;           // enumeration vs sampled estimate
};

Plaintext encode(double x, Sensitivity delta, const PublicKey& pk);
double decode(const Plaintext& m, Sensitivity delta, const PublicKey& pk);

/// Signed representative m - p*[m>q]; the integer the decoder scales by delta.
BigInt signed_plaintext_value(const Plaintext& m, const PublicKey& pk);

/// Exact maximal gap by full enumeration; requires p <= 2^24.
GroupGapBound measure_d_max(const PublicKey& pk);

/// Sampled lower estimate for groups too large to enumerate. Diagnostics
/// only; never used on a correctness path.
GroupGapBound estimate_d_max(const PublicKey& pk, int windows, CryptoRng& rng);

/// Asymptotic gap scale 2^((k+1)/4); consecutive non-residue runs grow no
/// faster than ~p^(1/4).
double d_max_rough_bound(unsigned key_bits);

/// delta(k) = D / (2^((k-1)/2) - d_max/2); keeps elementwise products of
/// encoded values inside the group half-range.
Sensitivity select_sensitivity(double d_bound, unsigned key_bits, double d_max);

}  // namespace ecdesign

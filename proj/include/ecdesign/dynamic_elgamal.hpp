#pragma once

#include <utility>
#include <vector>

#include "ecdesign/elgamal.hpp"

namespace ecdesign {

// Dynamic-key extension: per epoch the key pair moves through
//   T_K: h <- h g^s' mod p,  s <- s + s' mod q
// and every outstanding ciphertext through
//   T_C: (c1, c2) <- (c1 g^r', (c1 g^r')^s' c2 h^r') mod p,
// with one s' shared by the whole epoch and a fresh r' per ciphertext.
// T_C must see the pre-update h; the normative order is: capture h,
// transition the ciphertexts, then transition the key.

struct DynState {
  PublicKey pk;
  SecretKey sk;
  long epoch = 0;
};

struct EpochRandomness {
  BigInt s_prime;
  std::vector<BigInt> r_prime_per_ciphertext;
};

bool keys_consistent(const DynState& state);

DynState key_transition(const DynState& state, const BigInt& s_prime);

Ciphertext cipher_transition(const PublicKey& pk_before, const Ciphertext& c,
                             const BigInt& r_prime, const BigInt& s_prime);

EpochRandomness draw_epoch_randomness(const BigInt& q, std::size_t ciphertext_count,
                                      CryptoRng& rng);

/// One atomic epoch: a single s' drives both maps, each tracked ciphertext
/// gets its own r'. Transitioned ciphertexts decrypt unchanged under the new
/// secret key.
std::pair<DynState, std::vector<Ciphertext>> epoch_step_with(
    const DynState& state, const std::vector<Ciphertext>& ciphertexts,
    const EpochRandomness& randomness);

std::pair<DynState, std::vector<Ciphertext>> epoch_step(
    const DynState& state, const std::vector<Ciphertext>& ciphertexts, CryptoRng& rng);

}  // namespace ecdesign

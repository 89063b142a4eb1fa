#include "ecdesign/dynamic_elgamal.hpp"

#include <stdexcept>

namespace ecdesign {

namespace {

void require_in_zq(const BigInt& v, const BigInt& q, const char* what) {
  if (v < 0 || v >= q)
    throw std::invalid_argument(std::string(what) + " outside Z_q");
}

}  // namespace

bool keys_consistent(const DynState& state) {
  return pow_mod(state.pk.g, state.sk.s, state.pk.p) == state.pk.h;
}

DynState key_transition(const DynState& state, const BigInt& s_prime) {
  require_in_zq(s_prime, state.pk.q, "key_transition: s'");
  DynState next = state;
  next.pk.h = state.pk.h * pow_mod(state.pk.g, s_prime, state.pk.p) % state.pk.p;
  next.sk.s = (state.sk.s + s_prime) % state.pk.q;
  next.epoch = state.epoch + 1;
  return next;
}

Ciphertext cipher_transition(const PublicKey& pk_before, const Ciphertext& c,
                             const BigInt& r_prime, const BigInt& s_prime) {
  require_in_zq(r_prime, pk_before.q, "cipher_transition: r'");
  require_in_zq(s_prime, pk_before.q, "cipher_transition: s'");
  // h here is the pre-update public value; the updated secret key then
  // cancels the blinding exactly.
  BigInt c1 = c.c1 * pow_mod(pk_before.g, r_prime, pk_before.p) % pk_before.p;
  BigInt c2 = pow_mod(c1, s_prime, pk_before.p) * c.c2 % pk_before.p;
  c2 = c2 * pow_mod(pk_before.h, r_prime, pk_before.p) % pk_before.p;
  return {std::move(c1), std::move(c2)};
}

EpochRandomness draw_epoch_randomness(const BigInt& q, std::size_t ciphertext_count,
                                      CryptoRng& rng) {
  EpochRandomness out;
  out.s_prime = rng.uniform_below(q);
  out.r_prime_per_ciphertext.reserve(ciphertext_count);
  for (std::size_t i = 0; i < ciphertext_count; ++i)
    out.r_prime_per_ciphertext.push_back(rng.uniform_below(q));
  return out;
}

std::pair<DynState, std::vector<Ciphertext>> epoch_step_with(
    const DynState& state, const std::vector<Ciphertext>& ciphertexts,
    const EpochRandomness& randomness) {
  if (randomness.r_prime_per_ciphertext.size() != ciphertexts.size())
    throw std::invalid_argument("epoch_step: need one r' per ciphertext");

  std::vector<Ciphertext> transitioned;
  transitioned.reserve(ciphertexts.size());
  for (std::size_t i = 0; i < ciphertexts.size(); ++i)
    transitioned.push_back(cipher_transition(state.pk, ciphertexts[i],
                                             randomness.r_prime_per_ciphertext[i],
                                             randomness.s_prime));
  DynState next = key_transition(state, randomness.s_prime);
  return {std::move(next), std::move(transitioned)};
}

std::pair<DynState, std::vector<Ciphertext>> epoch_step(
    const DynState& state, const std::vector<Ciphertext>& ciphertexts, CryptoRng& rng) {
  return epoch_step_with(state, ciphertexts,
                         draw_epoch_randomness(state.pk.q, ciphertexts.size(), rng));
}

}  // namespace ecdesign

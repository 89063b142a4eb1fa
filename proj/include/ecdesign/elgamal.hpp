#pragma once

#include <string>
#include <utility>

#include "ecdesign/rng.hpp"

namespace ecdesign {

// Multiplicative homomorphic ElGamal over the quadratic-residue subgroup G of
// Z_p*, where p = 2q+1 is a safe prime and |G| = q. Plaintexts are elements
// of G; a ciphertext is a pair (g^r, m h^r) mod p.

struct PublicKey {
  BigInt p;  // safe prime, p = 2q+1
  BigInt q;  // Sophie Germain prime, key_bits wide
  BigInt g;  // generator of the order-q subgroup
  BigInt h;  // g^s mod p
};

struct SecretKey {
  BigInt s;  // in Z_q
};

struct Ciphertext {
  BigInt c1;
  BigInt c2;
  bool operator==(const Ciphertext&) const = default;
};

using Plaintext = BigInt;

struct KeygenOptions {
  int miller_rabin_rounds = 64;   // error < 4^-64 per accepted prime
  long max_candidates = 10'000'000;
};

inline BigInt pow_mod(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

inline std::size_t bit_length(const BigInt& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

bool is_probable_prime(const BigInt& n, int rounds, CryptoRng& rng);

/// Generate a fresh key pair: random key_bits-wide q with p = 2q+1 prime,
/// g = a^2 mod p for random a (retried while g = 1), s uniform in Z_q.
std::pair<PublicKey, SecretKey> keygen(unsigned key_bits, CryptoRng& rng,
                                       const KeygenOptions& opt = {});

/// Euler criterion m^q = 1 (mod p). Throws unless 0 < m < p.
bool is_group_element(const PublicKey& pk, const BigInt& m);
void require_group_element(const PublicKey& pk, const BigInt& m);

Ciphertext encrypt_with_r(const PublicKey& pk, const Plaintext& m, const BigInt& r);
Ciphertext encrypt(const PublicKey& pk, const Plaintext& m, CryptoRng& rng);
Plaintext decrypt(const PublicKey& pk, const SecretKey& sk, const Ciphertext& c);

/// Componentwise product of ciphertexts; decrypts to m m' mod p.
Ciphertext hom_mul(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);

/// Uniform element of G (square of a uniform nonzero residue).
Plaintext random_plaintext(const PublicKey& pk, CryptoRng& rng);

// Decimal-string records; round-trips are bit exact.
std::string to_record(const PublicKey& pk);
std::string to_record(const SecretKey& sk);
std::string to_record(const Ciphertext& c);
PublicKey public_key_from_record(const std::string& text);
SecretKey secret_key_from_record(const std::string& text);
Ciphertext ciphertext_from_record(const std::string& text);

}  // namespace ecdesign

#include "ecdesign/elgamal.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace ecdesign {

namespace {

// Primes below 1024, used to discard most candidates before Miller-Rabin.
const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    std::array<bool, 1024> composite{};
    for (unsigned long i = 2; i < composite.size(); ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j < composite.size(); j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool passes_trial_division(const BigInt& n) {
  for (unsigned long sp : small_primes()) {
    if (mpz_cmp_ui(n.get_mpz_t(), sp) == 0) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), sp)) return false;
  }
  return true;
}

}  // namespace

bool is_probable_prime(const BigInt& n, int rounds, CryptoRng& rng) {
  if (n < 2) return false;
  if (n == 2 || n == 3) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;

  // n - 1 = d * 2^s with d odd
  BigInt n_minus_1 = n - 1;
  const mp_bitcnt_t s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  BigInt d;
  mpz_fdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

  const BigInt span = n - 3;  // witnesses in [2, n-2]
  for (int round = 0; round < rounds; ++round) {
    const BigInt a = 2 + rng.uniform_below(span);
    BigInt x = pow_mod(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (mp_bitcnt_t i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::pair<PublicKey, SecretKey> keygen(unsigned key_bits, CryptoRng& rng,
                                       const KeygenOptions& opt) {
  if (key_bits < 3)
    throw std::invalid_argument("keygen: key length must be at least 3 bits");

  for (long tries = 0; tries < opt.max_candidates; ++tries) {
    BigInt q = rng.random_bits(key_bits);
    mpz_setbit(q.get_mpz_t(), key_bits - 1);  // exactly key_bits wide
    mpz_setbit(q.get_mpz_t(), 0);             // odd
    if (!passes_trial_division(q)) continue;
    const BigInt p = 2 * q + 1;
    if (!passes_trial_division(p)) continue;
    // Cheap one-round screen before the full certainty level.
    if (!is_probable_prime(q, 1, rng)) continue;
    if (!is_probable_prime(p, 1, rng)) continue;
    if (!is_probable_prime(q, opt.miller_rabin_rounds, rng)) continue;
    if (!is_probable_prime(p, opt.miller_rabin_rounds, rng)) continue;

    // Any square != 1 generates the order-q subgroup.
    BigInt g;
    do {
      const BigInt a = 1 + rng.uniform_below(p - 1);
      g = a * a % p;
    } while (g == 1);

    const BigInt s = rng.uniform_below(q);
    const BigInt h = pow_mod(g, s, p);
    return {PublicKey{p, q, g, h}, SecretKey{s}};
  }
  throw std::runtime_error("keygen: no safe prime found within " +
                           std::to_string(opt.max_candidates) + " candidates");
}

bool is_group_element(const PublicKey& pk, const BigInt& m) {
  if (m <= 0 || m >= pk.p)
    throw std::invalid_argument("is_group_element: value outside (0, p)");
  return pow_mod(m, pk.q, pk.p) == 1;
}

void require_group_element(const PublicKey& pk, const BigInt& m) {
  if (!is_group_element(pk, m))
    throw std::runtime_error("not a group element");
}

Ciphertext encrypt_with_r(const PublicKey& pk, const Plaintext& m, const BigInt& r) {
  require_group_element(pk, m);
  if (r < 0 || r >= pk.q)
    throw std::invalid_argument("encrypt: nonce outside Z_q");
  BigInt c1 = pow_mod(pk.g, r, pk.p);
  BigInt c2 = m * pow_mod(pk.h, r, pk.p) % pk.p;
  return {std::move(c1), std::move(c2)};
}

Ciphertext encrypt(const PublicKey& pk, const Plaintext& m, CryptoRng& rng) {
  return encrypt_with_r(pk, m, rng.uniform_below(pk.q));
}

Plaintext decrypt(const PublicKey& pk, const SecretKey& sk, const Ciphertext& c) {
  if (c.c1 == 0) throw std::invalid_argument("decrypt: c1 must be nonzero");
  // c1^{-s} c2 with the inverse taken as (c1^s)^{p-2}
  const BigInt t = pow_mod(c.c1, sk.s, pk.p);
  return pow_mod(t, pk.p - 2, pk.p) * c.c2 % pk.p;
}

Ciphertext hom_mul(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  return {a.c1 * b.c1 % pk.p, a.c2 * b.c2 % pk.p};
}

Plaintext random_plaintext(const PublicKey& pk, CryptoRng& rng) {
  const BigInt a = 1 + rng.uniform_below(pk.p - 1);
  return a * a % pk.p;
}

namespace {

std::string field(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(name + "=", 0) == 0) return line.substr(name.size() + 1);
  }
  throw std::invalid_argument("record: missing field '" + name + "'");
}

BigInt parse_big(const std::string& digits) {
  BigInt v;
  if (mpz_set_str(v.get_mpz_t(), digits.c_str(), 10) != 0)
    throw std::invalid_argument("record: invalid decimal integer '" + digits + "'");
  return v;
}

}  // namespace

std::string to_record(const PublicKey& pk) {
  return "p=" + pk.p.get_str() + "\nq=" + pk.q.get_str() + "\ng=" + pk.g.get_str() +
         "\nh=" + pk.h.get_str() + "\n";
}

std::string to_record(const SecretKey& sk) { return "s=" + sk.s.get_str() + "\n"; }

std::string to_record(const Ciphertext& c) {
  return "c1=" + c.c1.get_str() + "\nc2=" + c.c2.get_str() + "\n";
}

PublicKey public_key_from_record(const std::string& text) {
  return {parse_big(field(text, "p")), parse_big(field(text, "q")),
          parse_big(field(text, "g")), parse_big(field(text, "h"))};
}

SecretKey secret_key_from_record(const std::string& text) {
  return {parse_big(field(text, "s"))};
}

Ciphertext ciphertext_from_record(const std::string& text) {
  return {parse_big(field(text, "c1")), parse_big(field(text, "c2"))};
}

}  // namespace ecdesign

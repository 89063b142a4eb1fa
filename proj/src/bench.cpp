#include "ecdesign/bench.hpp"

#include <chrono>
#include <cmath>

#include "ecdesign/dynamic_elgamal.hpp"

namespace ecdesign {

namespace {

using Clock = std::chrono::steady_clock;

OpTiming stats_of(unsigned key_bits, const std::string& op,
                  const std::vector<double>& samples_ms) {
  OpTiming t;
  t.key_bits = key_bits;
  t.op = op;
  t.trials = static_cast<int>(samples_ms.size());
  t.min_ms = samples_ms.front();
  t.max_ms = samples_ms.front();
  double sum = 0.0;
  for (double v : samples_ms) {
    t.min_ms = std::min(t.min_ms, v);
    t.max_ms = std::max(t.max_ms, v);
    sum += v;
  }
  t.mean_ms = sum / t.trials;
  double sq = 0.0;
  for (double v : samples_ms) sq += (v - t.mean_ms) * (v - t.mean_ms);
  t.std_ms = std::sqrt(sq / t.trials);
  return t;
}

}  // namespace

std::vector<OpTiming> bench_crypto(unsigned key_bits, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
  CryptoRng rng(seed);
  auto [pk, sk] = keygen(key_bits, rng);

  std::vector<Plaintext> messages(trials);
  for (auto& m : messages) m = random_plaintext(pk, rng);

  std::vector<double> enc_ms(trials), dec_ms(trials), tk_ms(trials), tc_ms(trials);
  std::vector<Ciphertext> cts(trials);

  for (int i = 0; i < trials; ++i) {
    const auto start = Clock::now();
    cts[i] = encrypt(pk, messages[i], rng);
    enc_ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  for (int i = 0; i < trials; ++i) {
    const auto start = Clock::now();
    volatile bool sink = decrypt(pk, sk, cts[i]) == messages[i];
    (void)sink;
    dec_ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }

  DynState state{pk, sk, 0};
  for (int i = 0; i < trials; ++i) {
    const BigInt s_prime = rng.uniform_below(pk.q);
    const auto start = Clock::now();
    state = key_transition(state, s_prime);
    tk_ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  for (int i = 0; i < trials; ++i) {
    const BigInt r_prime = rng.uniform_below(pk.q);
    const BigInt s_prime = rng.uniform_below(pk.q);
    const auto start = Clock::now();
    cts[i] = cipher_transition(pk, cts[i], r_prime, s_prime);
    tc_ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }

  return {stats_of(key_bits, "Enc", enc_ms), stats_of(key_bits, "Dec", dec_ms),
          stats_of(key_bits, "TK", tk_ms), stats_of(key_bits, "TC", tc_ms)};
}

}  // namespace ecdesign

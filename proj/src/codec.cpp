#include "ecdesign/codec.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ecdesign {

namespace {

void require_sensitivity(Sensitivity s) {
  if (!(s.delta > 0.0) || !std::isfinite(s.delta))
    throw std::invalid_argument("sensitivity must be a positive finite real");
}

bool in_group(const PublicKey& pk, const BigInt& m) {
  return m > 0 && m < pk.p && pow_mod(m, pk.q, pk.p) == 1;
}

}  // namespace

Plaintext encode(double x, Sensitivity delta, const PublicKey& pk) {
  require_sensitivity(delta);
  if (!std::isfinite(x)) throw std::invalid_argument("encode: value must be finite");
  const double y = x / delta.delta;
  if (!std::isfinite(y))
    throw std::invalid_argument("encode: |x|/delta exceeds the representable range");

  // exact floor of y in big-int form; mpz_set_d truncates toward zero and
  // keeps every bit of the double
  BigInt floor_target;
  mpz_set_d(floor_target.get_mpz_t(), y);
  double frac = y - mpz_get_d(floor_target.get_mpz_t());
  if (frac < 0.0) {
    floor_target -= 1;
    frac += 1.0;
  }
  if (x < 0) floor_target += pk.p;
  // target = x/delta + p*[x<0] must land in [0, p)
  if (floor_target < 0 || (x >= 0 && floor_target >= pk.p))
    throw std::invalid_argument("encode: target outside [0, p)");

  // Nearest group element, distances taken cyclically so targets inside the
  // boundary run next to 0/p still land within half the maximal gap. Walk
  // down from floor(target) and up from floor(target)+1 until a residue
  // appears on each side; ties go to the smaller element. The position "0"
  // (= p) is not an element and is skipped while distance keeps counting.
  constexpr long kMaxSteps = 1'000'000;
  const auto wrap = [&pk](const BigInt& pos) -> BigInt {
    if (pos <= 0) return pos + pk.p;
    if (pos >= pk.p) return pos - pk.p;
    return pos;
  };

  BigInt down_pos = floor_target;
  double down_dist = frac;
  bool have_down = false;
  for (long step = 0; step < kMaxSteps && down_pos > floor_target - pk.p; ++step) {
    const BigInt cand = wrap(down_pos);
    if (cand != 0 && in_group(pk, cand)) {
      have_down = true;
      break;
    }
    down_pos -= 1;
    down_dist += 1.0;
  }
  BigInt up_pos = floor_target + 1;
  double up_dist = 1.0 - frac;
  bool have_up = false;
  for (long step = 0; step < kMaxSteps && up_pos < floor_target + pk.p; ++step) {
    const BigInt cand = wrap(up_pos);
    if (cand != 0 && in_group(pk, cand)) {
      have_up = true;
      break;
    }
    up_pos += 1;
    up_dist += 1.0;
  }

  if (have_down && have_up) {
    if (down_dist < up_dist) return wrap(down_pos);
    if (up_dist < down_dist) return wrap(up_pos);
    return std::min(wrap(down_pos), wrap(up_pos));
  }
  if (have_down) return wrap(down_pos);
  if (have_up) return wrap(up_pos);
  throw std::runtime_error("encode: no group element near target");
}

double decode(const Plaintext& m, Sensitivity delta, const PublicKey& pk) {
  require_sensitivity(delta);
  require_group_element(pk, m);
  return delta.delta * signed_plaintext_value(m, pk).get_d();
}

BigInt signed_plaintext_value(const Plaintext& m, const PublicKey& pk) {
  return m > pk.q ? BigInt(m - pk.p) : m;
}

GroupGapBound measure_d_max(const PublicKey& pk) {
  if (pk.p > BigInt(1) << 24)
    throw std::invalid_argument(
        "measure_d_max: group too large to enumerate; use estimate_d_max");
  const unsigned long p = pk.p.get_ui();
  std::vector<bool> residue(p, false);
  for (unsigned long a = 1; a <= (p - 1) / 2; ++a)
    residue[static_cast<unsigned long>((static_cast<unsigned long long>(a) * a) % p)] = true;

  unsigned long d_max = 0;
  unsigned long first = 0, prev = 0;
  bool have_prev = false;
  for (unsigned long m = 1; m < p; ++m) {
    if (!residue[m]) continue;
    if (!have_prev) first = m;
    if (have_prev && m - prev > d_max) d_max = m - prev;
    prev = m;
    have_prev = true;
  }
  // the gap wraps past p: ..., g_max, g_min + p, ...
  if (have_prev && first + p - prev > d_max) d_max = first + p - prev;
  return {d_max, true};
}

GroupGapBound estimate_d_max(const PublicKey& pk, int windows, CryptoRng& rng) {
  if (windows < 1) throw std::invalid_argument("estimate_d_max: need windows >= 1");
  unsigned long best = 1;
  for (int w = 0; w < windows; ++w) {
    BigInt m = 1 + rng.uniform_below(pk.p - 1);
    // first residue at or above m
    while (!in_group(pk, m)) {
      m += 1;
      if (m >= pk.p) m = 1;
    }
    BigInt next = m + 1;
    unsigned long gap = 1;
    while (next < pk.p && !in_group(pk, next)) {
      next += 1;
      ++gap;
    }
    if (next < pk.p && gap > best) best = gap;
  }
  return {best, false};
}

double d_max_rough_bound(unsigned key_bits) {
  return std::exp2(0.25 * (key_bits + 1));
}

Sensitivity select_sensitivity(double d_bound, unsigned key_bits, double d_max) {
  if (!(d_bound > 0.0) || !std::isfinite(d_bound))
    throw std::invalid_argument("select_sensitivity: signal bound must be positive");
  if (d_max < 1.0)
    throw std::invalid_argument("select_sensitivity: d_max must be >= 1");
  const double denom = std::exp2(0.5 * (key_bits - 1.0)) - 0.5 * d_max;
  if (!(denom > 0.0))
    throw std::runtime_error("select_sensitivity: key too short for this signal bound");
  const double delta = d_bound / denom;
  if (!(delta > 0.0))
    throw std::runtime_error("select_sensitivity: sensitivity underflow at this key length");
  return Sensitivity{delta};
}

}  // namespace ecdesign

#pragma once

#include <span>
#include <vector>

#include "ecdesign/codec.hpp"
#include "ecdesign/numerics.hpp"

namespace ecdesign {

// Encrypted state feedback: the gain matrix and the state vector are encoded
// and encrypted elementwise; the controller multiplies ciphertext cells
// without touching plaintext; the plant side decrypts, decodes with the
// product sensitivity delta_F*delta_x and row-sums to restore the input.

struct EncryptedGain {
  Index rows = 0, cols = 0;
  std::vector<Ciphertext> cells;  // row-major
  Sensitivity delta;
  BigInt max_abs_encoding;  // max_ij |encoded F_ij| as a signed integer

  const Ciphertext& at(Index i, Index j) const { return cells[i * cols + j]; }
  Ciphertext& at(Index i, Index j) { return cells[i * cols + j]; }
};

struct EncryptedState {
  std::vector<Ciphertext> cells;
  Sensitivity delta;
  BigInt max_abs_encoding;
};

struct EncryptedProduct {
  Index rows = 0, cols = 0;
  std::vector<Ciphertext> cells;  // row-major

  const Ciphertext& at(Index i, Index j) const { return cells[i * cols + j]; }
};

EncryptedGain encrypt_gain(const Matrix& F, Sensitivity delta_F, const PublicKey& pk,
                           CryptoRng& rng);

EncryptedState encrypt_state(const Vector& x, Sensitivity delta_x, const PublicKey& pk,
                             CryptoRng& rng);

/// c_U[i][j] = cF[i][j] * cx[j] (componentwise homomorphic product).
EncryptedProduct controller_eval(const PublicKey& pk, const EncryptedGain& cF,
                                 std::span<const Ciphertext> cx);

/// Throws "plaintext overflow" when |encoded gain|*|encoded state| can leave
/// the group half-range [1, q], i.e. when a product would wrap mod p.
void require_no_overflow(const PublicKey& pk, const BigInt& gain_max_abs,
                         const BigInt& state_max_abs);

/// u_i = sum_j decode(decrypt(c_U[i][j])) with sensitivity delta_F*delta_x.
Vector restore_input(const PublicKey& pk, const SecretKey& sk, const EncryptedProduct& cU,
                     Sensitivity delta_F, Sensitivity delta_x);

}  // namespace ecdesign

#include "ecdesign/encrypted_control.hpp"

#include <stdexcept>

namespace ecdesign {

EncryptedGain encrypt_gain(const Matrix& F, Sensitivity delta_F, const PublicKey& pk,
                           CryptoRng& rng) {
  EncryptedGain out;
  out.rows = F.rows();
  out.cols = F.cols();
  out.delta = delta_F;
  out.cells.reserve(F.size());
  out.max_abs_encoding = 0;
  for (Index i = 0; i < F.rows(); ++i) {
    for (Index j = 0; j < F.cols(); ++j) {
      const Plaintext m = encode(F(i, j), delta_F, pk);
      BigInt mag = abs(signed_plaintext_value(m, pk));
      if (mag > out.max_abs_encoding) out.max_abs_encoding = mag;
      out.cells.push_back(encrypt(pk, m, rng));
    }
  }
  return out;
}

EncryptedState encrypt_state(const Vector& x, Sensitivity delta_x, const PublicKey& pk,
                             CryptoRng& rng) {
  EncryptedState out;
  out.delta = delta_x;
  out.cells.reserve(x.size());
  out.max_abs_encoding = 0;
  for (Index j = 0; j < x.size(); ++j) {
    const Plaintext m = encode(x(j), delta_x, pk);
    BigInt mag = abs(signed_plaintext_value(m, pk));
    if (mag > out.max_abs_encoding) out.max_abs_encoding = mag;
    out.cells.push_back(encrypt(pk, m, rng));
  }
  return out;
}

EncryptedProduct controller_eval(const PublicKey& pk, const EncryptedGain& cF,
                                 std::span<const Ciphertext> cx) {
  if (static_cast<Index>(cx.size()) != cF.cols)
    throw std::invalid_argument("controller_eval: state length must match gain columns");
  EncryptedProduct out;
  out.rows = cF.rows;
  out.cols = cF.cols;
  out.cells.reserve(cF.cells.size());
  for (Index i = 0; i < cF.rows; ++i)
    for (Index j = 0; j < cF.cols; ++j)
      out.cells.push_back(hom_mul(pk, cF.at(i, j), cx[j]));
  return out;
}

void require_no_overflow(const PublicKey& pk, const BigInt& gain_max_abs,
                         const BigInt& state_max_abs) {
  if (gain_max_abs * state_max_abs > pk.q)
    throw std::runtime_error("plaintext overflow: encoded product exceeds q");
}

Vector restore_input(const PublicKey& pk, const SecretKey& sk, const EncryptedProduct& cU,
                     Sensitivity delta_F, Sensitivity delta_x) {
  const Sensitivity product_delta{delta_F.delta * delta_x.delta};
  Vector u(cU.rows);
  for (Index i = 0; i < cU.rows; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < cU.cols; ++j)
      acc += decode(decrypt(pk, sk, cU.at(i, j)), product_delta, pk);
    u(i) = acc;
  }
  return u;
}

}  // namespace ecdesign

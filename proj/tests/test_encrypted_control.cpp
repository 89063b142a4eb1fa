#include <cmath>
#include <random>

#include "doctest.h"
#include "ecdesign/encrypted_control.hpp"

using namespace ecdesign;

namespace {

PublicKey tiny_pk() { return {11, 5, 3, 9}; }
SecretKey tiny_sk() { return {2}; }

}  // namespace

TEST_CASE("scalar loop on the mod-11 group reproduces F*x exactly") {
  const PublicKey pk = tiny_pk();
  const SecretKey sk = tiny_sk();
  CryptoRng rng(1);

  Matrix F(1, 1);
  F << 0.1;  // encodes to 1
  Vector x(1);
  x << 0.4;  // encodes to 4

  const EncryptedGain cF = encrypt_gain(F, {0.1}, pk, rng);
  CHECK(cF.max_abs_encoding == 1);
  const EncryptedState cx = encrypt_state(x, {0.1}, pk, rng);
  CHECK(cx.max_abs_encoding == 4);

  require_no_overflow(pk, cF.max_abs_encoding, cx.max_abs_encoding);
  const EncryptedProduct cU = controller_eval(pk, cF, cx.cells);
  const Vector u = restore_input(pk, sk, cU, {0.1}, {0.1});
  CHECK(u(0) == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("scalar homomorphic product of encoded gain and state") {
  const PublicKey pk = tiny_pk();
  const SecretKey sk = tiny_sk();
  CryptoRng rng(2);
  Matrix F(1, 1);
  F << 0.1;
  const EncryptedGain cF = encrypt_gain(F, {0.1}, pk, rng);
  const std::vector<Ciphertext> cx = {encrypt(pk, 4, rng)};
  const EncryptedProduct cU = controller_eval(pk, cF, cx);
  CHECK(decrypt(pk, sk, cU.at(0, 0)) == 4);  // 1*4 mod 11
}

TEST_CASE("overflow guard: 0.3 * 0.4 at delta 0.1 wraps past q = 5") {
  const PublicKey pk = tiny_pk();
  CryptoRng rng(3);
  Matrix F(1, 1);
  F << 0.3;
  Vector x(1);
  x << 0.4;
  const EncryptedGain cF = encrypt_gain(F, {0.1}, pk, rng);
  const EncryptedState cx = encrypt_state(x, {0.1}, pk, rng);
  CHECK(cF.max_abs_encoding * cx.max_abs_encoding == 12);
  CHECK_THROWS_WITH_AS(require_no_overflow(pk, cF.max_abs_encoding, cx.max_abs_encoding),
                       "plaintext overflow: encoded product exceeds q",
                       std::runtime_error);
}

TEST_CASE("identity gain at small delta restores the state") {
  CryptoRng rng(4);
  const auto [pk, sk] = keygen(64, rng);
  const Sensitivity delta{1e-6};
  Matrix F = Matrix::Identity(2, 2);
  Vector x(2);
  x << 0.5, -0.75;
  const EncryptedGain cF = encrypt_gain(F, delta, pk, rng);
  const EncryptedState cx = encrypt_state(x, delta, pk, rng);
  require_no_overflow(pk, cF.max_abs_encoding, cx.max_abs_encoding);
  const Vector u = restore_input(pk, sk, controller_eval(pk, cF, cx.cells), delta, delta);
  CHECK((u - x).cwiseAbs().maxCoeff() <= 1e-3);

  // the decrypted sums equal the plaintext-side quantized products exactly
  for (Index i = 0; i < 2; ++i) {
    double expected = 0.0;
    for (Index j = 0; j < 2; ++j) {
      const double f_signed = signed_plaintext_value(encode(F(i, j), delta, pk), pk).get_d();
      const double x_signed = signed_plaintext_value(encode(x(j), delta, pk), pk).get_d();
      expected += delta.delta * delta.delta * f_signed * x_signed;
    }
    CHECK(u(i) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dimension mismatch in controller_eval is rejected") {
  const PublicKey pk = tiny_pk();
  CryptoRng rng(5);
  Matrix F(1, 1);
  F << 0.1;
  const EncryptedGain cF = encrypt_gain(F, {0.1}, pk, rng);
  const std::vector<Ciphertext> two = {encrypt(pk, 4, rng), encrypt(pk, 4, rng)};
  CHECK_THROWS_AS(controller_eval(pk, cF, two), std::invalid_argument);
}

TEST_CASE("2x2 homomorphic consistency against plaintext products at k=512") {
  CryptoRng rng(6);
  const auto [pk, sk] = keygen(512, rng);
  const Sensitivity delta{1e-4};
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix F(2, 2);
  Vector x(2);
  for (Index i = 0; i < 2; ++i) {
    x(i) = unit(gen);
    for (Index j = 0; j < 2; ++j) F(i, j) = unit(gen);
  }
  const EncryptedGain cF = encrypt_gain(F, delta, pk, rng);
  const EncryptedState cx = encrypt_state(x, delta, pk, rng);
  require_no_overflow(pk, cF.max_abs_encoding, cx.max_abs_encoding);
  const EncryptedProduct cU = controller_eval(pk, cF, cx.cells);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      const Plaintext mF = encode(F(i, j), delta, pk);
      const Plaintext mx = encode(x(j), delta, pk);
      CHECK(decrypt(pk, sk, cU.at(i, j)) == mF * mx % pk.p);
    }
  }
}

TEST_CASE("restored input meets the elementwise product error bound at k=512") {
  CryptoRng rng(8);
  const auto [pk, sk] = keygen(512, rng);
  const Sensitivity delta{1e-4};
  Matrix A_p(2, 2);
  A_p << 1.0, 0.5, 0.0, -1.2;
  Matrix F(1, 2);
  F << -0.0398, 0.2;
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x(2);
    x << unit(gen), unit(gen);
    const EncryptedGain cF = encrypt_gain(F, delta, pk, rng);
    const EncryptedState cx = encrypt_state(x, delta, pk, rng);
    require_no_overflow(pk, cF.max_abs_encoding, cx.max_abs_encoding);
    const Vector u = restore_input(pk, sk, controller_eval(pk, cF, cx.cells), delta, delta);
    CHECK((u - F * x).cwiseAbs().maxCoeff() <= 1e-2);
  }
}

TEST_CASE("error contracts as the sensitivities shrink") {
  CryptoRng rng(10);
  const auto [pk, sk] = keygen(64, rng);
  Matrix F(1, 2);
  F << 0.7, -0.3;
  Vector x(2);
  x << 0.9, 0.4;
  std::vector<double> errs;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const Sensitivity delta{d};
    const EncryptedGain cF = encrypt_gain(F, delta, pk, rng);
    const EncryptedState cx = encrypt_state(x, delta, pk, rng);
    require_no_overflow(pk, cF.max_abs_encoding, cx.max_abs_encoding);
    const Vector u = restore_input(pk, sk, controller_eval(pk, cF, cx.cells), delta, delta);
    errs.push_back((u - F * x).cwiseAbs().maxCoeff());
  }
  CHECK(errs.back() < errs.front());
  CHECK(errs.back() < 1e-3);
}

#include "ecdesign/simulator.hpp"

#include <stdexcept>
#include <string>

namespace ecdesign {

PlantModel::PlantModel(Matrix a, Matrix b, Matrix noise_precision)
    : A_p(std::move(a)), B_p(std::move(b)), L(std::move(noise_precision)) {
  if (A_p.rows() != A_p.cols())
    throw std::invalid_argument("plant: A_p must be square");
  if (B_p.rows() != A_p.rows())
    throw std::invalid_argument("plant: B_p row count must match A_p");
  if (L.rows() != A_p.rows() || L.cols() != A_p.rows())
    throw std::invalid_argument("plant: L must be n x n");
  if (!all_finite(A_p) || !all_finite(B_p) || !all_finite(L))
    throw std::invalid_argument("plant: matrices must be finite");
  if (!is_controllable(A_p, B_p))
    throw std::invalid_argument("plant: (A_p, B_p) must be controllable");
  spd_solve(L, Matrix::Identity(L.rows(), L.cols()));  // SPD gate
}

Matrix PlantModel::noise_covariance() const {
  return spd_solve(L, Matrix::Identity(L.rows(), L.cols()));
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b) {
  const Index n = a.rows();
  Matrix ctrb(n, n * b.cols());
  Matrix block = b;
  for (Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return ctrb;
}

bool is_controllable(const Matrix& a, const Matrix& b) {
  Eigen::FullPivLU<Matrix> lu(controllability_matrix(a, b));
  return lu.rank() == a.rows();
}

Vector sample_noise(const Matrix& L, NoiseRng& rng) {
  Eigen::LLT<Matrix> llt(L);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sample_noise: precision matrix must be SPD");
  const Vector z = rng.gaussian_vector(L.rows());
  // Cov(w) = L^{-1}: with L = C C^T, solve C^T w = z.
  return llt.matrixU().solve(z);
}

LoopMode loop_mode_from_string(const std::string& name) {
  if (name == "plain") return LoopMode::plain;
  if (name == "static") return LoopMode::encrypted_static;
  if (name == "dynamic") return LoopMode::encrypted_dynamic;
  throw std::invalid_argument("unknown loop mode '" + name + "'");
}

std::string to_string(LoopMode mode) {
  switch (mode) {
    case LoopMode::plain: return "plain";
    case LoopMode::encrypted_static: return "static";
    case LoopMode::encrypted_dynamic: return "dynamic";
  }
  return "?";
}

namespace {

double auto_d_max(const PublicKey& pk, unsigned key_bits) {
  if (pk.p <= BigInt(1) << 24)
    return static_cast<double>(measure_d_max(pk).d_max);
  return d_max_rough_bound(key_bits);
}

}  // namespace

SimResult run_closed_loop(const PlantModel& model, const Matrix& F, const SimOptions& opt) {
  const Index n = model.state_dim();
  const Index m = model.input_dim();
  if (F.rows() != m || F.cols() != n)
    throw std::invalid_argument("run_closed_loop: gain must be m x n");
  if (opt.steps < 0) throw std::invalid_argument("run_closed_loop: steps must be >= 0");

  NoiseRng noise(derive_seed(opt.seed, Stream::noise));
  NoiseRng init(derive_seed(opt.seed, Stream::initial_state));
  CryptoRng crypto(derive_seed(opt.seed, Stream::crypto));

  Vector x;
  if (opt.x0) {
    if (opt.x0->size() != n) throw std::invalid_argument("run_closed_loop: x0 must be length n");
    x = *opt.x0;
  } else if (opt.zero_noise) {
    x = Vector::Zero(n);
  } else {
    x = sample_noise(model.L, init);
  }

  SimResult result;
  result.trajectory.seed = opt.seed;
  result.trajectory.states.reserve(opt.steps + 1);
  result.trajectory.inputs.reserve(opt.steps);

  const bool encrypted = opt.mode != LoopMode::plain;
  PublicKey pk;
  SecretKey sk;
  EncryptedGain cF;
  Sensitivity delta_F{1.0}, delta_x{1.0};
  DynState dyn;

  if (encrypted) {
    auto [pub, sec] = keygen(opt.key_bits, crypto);
    pk = pub;
    sk = sec;
    if (!opt.delta_gain || !opt.delta_state) {
      const double d_max = auto_d_max(pk, opt.key_bits);
      const double bound = std::max({F.cwiseAbs().maxCoeff(), opt.state_bound, 1e-300});
      const Sensitivity auto_delta = select_sensitivity(bound, opt.key_bits, d_max);
      delta_F = Sensitivity{opt.delta_gain.value_or(auto_delta.delta)};
      delta_x = Sensitivity{opt.delta_state.value_or(auto_delta.delta)};
    } else {
      delta_F = Sensitivity{*opt.delta_gain};
      delta_x = Sensitivity{*opt.delta_state};
    }
    cF = encrypt_gain(F, delta_F, pk, crypto);
    dyn = DynState{pk, sk, 0};
    result.delta_gain = delta_F.delta;
    result.delta_state = delta_x.delta;
  }

  result.trajectory.states.push_back(x);
  for (long t = 0; t < opt.steps; ++t) {
    Vector u;
    if (!encrypted) {
      u = F * x;
    } else {
      try {
        EncryptedState cx = encrypt_state(x, delta_x, dyn.pk, crypto);
        require_no_overflow(dyn.pk, cF.max_abs_encoding, cx.max_abs_encoding);
        result.log.entries.push_back({t, dyn.epoch, dyn.pk.h, cx.cells});
        const EncryptedProduct cU = controller_eval(dyn.pk, cF, cx.cells);
        u = restore_input(dyn.pk, dyn.sk, cU, delta_F, delta_x);
      } catch (const std::exception& e) {
        throw std::runtime_error("step " + std::to_string(t) + ": " + e.what());
      }
      if (opt.mode == LoopMode::encrypted_dynamic) {
        auto [next, transitioned] = epoch_step(dyn, cF.cells, crypto);
        dyn = next;
        cF.cells = std::move(transitioned);
      }
    }
    const Vector w = opt.zero_noise ? Vector::Zero(n).eval() : sample_noise(model.L, noise);
    x = model.A_p * x + model.B_p * u + w;
    result.trajectory.inputs.push_back(u);
    result.trajectory.states.push_back(x);
  }
  return result;
}

}  // namespace ecdesign

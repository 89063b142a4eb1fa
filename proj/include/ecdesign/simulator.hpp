#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecdesign/dynamic_elgamal.hpp"
#include "ecdesign/encrypted_control.hpp"
#include "ecdesign/numerics.hpp"

namespace ecdesign {

/// x_{t+1} = A_p x_t + B_p u_t + w_t with w ~ N(0, L^{-1}).
struct PlantModel {
  Matrix A_p;
  Matrix B_p;
  Matrix L;  // noise precision, SPD

  PlantModel(Matrix a, Matrix b, Matrix noise_precision);

  Index state_dim() const { return A_p.rows(); }
  Index input_dim() const { return B_p.cols(); }
  Matrix noise_covariance() const;  // L^{-1}
};

Matrix controllability_matrix(const Matrix& a, const Matrix& b);
bool is_controllable(const Matrix& a, const Matrix& b);

/// w with covariance L^{-1}: standard normals pushed through the inverse
/// Cholesky factor of L.
Vector sample_noise(const Matrix& L, NoiseRng& rng);

enum class LoopMode { plain, encrypted_static, encrypted_dynamic };

LoopMode loop_mode_from_string(const std::string& name);
std::string to_string(LoopMode mode);

struct SimOptions {
  LoopMode mode = LoopMode::plain;
  long steps = 0;  // T: produces states x_0..x_T and inputs u_0..u_{T-1}
  std::uint64_t seed = 0;
  bool zero_noise = false;
  std::optional<Vector> x0;  // default: N(0, L^{-1}), or zero when zero_noise
  unsigned key_bits = 512;
  std::optional<double> delta_gain;
  std::optional<double> delta_state;
  double state_bound = 1.0;  // signal bound driving automatic sensitivity
};

struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  std::uint64_t seed = 0;
};

struct CipherLogEntry {
  long t = 0;
  long epoch = 0;
  BigInt h;  // public h in force when the state was encrypted
  std::vector<Ciphertext> state_cells;
};

struct CipherLog {
  std::vector<CipherLogEntry> entries;
};

struct SimResult {
  Trajectory trajectory;
  CipherLog log;
  double delta_gain = 0.0;
  double delta_state = 0.0;
};

/// Closed-loop run. Plain mode applies u = F x exactly; encrypted modes route
/// the feedback through the homomorphic controller; dynamic mode additionally
/// steps the key/ciphertext epoch once per sampling instant.
SimResult run_closed_loop(const PlantModel& model, const Matrix& F, const SimOptions& opt);

}  // namespace ecdesign

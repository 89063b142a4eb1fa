#pragma once

#include <complex>
#include <vector>

#include "ecdesign/security_curves.hpp"
#include "ecdesign/simulator.hpp"

namespace ecdesign {

// Joint design of the feedback gain, the critical sample count and the
// minimum key length:
//   F*  minimum-energy (cheap-control) gain from the Riccati fixed point,
//   T*  smallest T with E(T) > n / gamma_c,
//   k*  smallest k with L(k) > tau_c * Upsilon / (T* + 1).

struct RiccatiSequence {
  std::vector<Matrix> P;      // P_0..P_T, terminal P_T = I
  std::vector<Matrix> gains;  // K_0..K_{T-1}, u_t = K_t x_t
};

/// Backward recursion P_t = A'P A - A'P B (B'P B)^{-1} B'P A + I from
/// P_T = I. Every iterate stays SPD for full-column-rank B.
RiccatiSequence riccati_finite(const Matrix& a, const Matrix& b, long horizon);

/// Stationary cheap-control gain: iterate the backward recursion to its fixed
/// point P, then F* = -(B'P B)^{-1} B'P A. The closed loop is verified Schur.
Matrix cheap_gain(const Matrix& a, const Matrix& b, double tol = 1e-12,
                  long max_iter = 1'000'000);

/// Ackermann single-input pole placement; returns F with eig(A + B F) at the
/// requested poles (closed under conjugation).
Matrix pole_place(const Matrix& a, const Matrix& b,
                  const std::vector<std::complex<double>>& poles);

/// Smallest T with E(T) > n / gamma_c, streamed in O(T).
long find_T_star(const Matrix& a_closed, double gamma_c,
                 long iteration_cap = 100'000'000);

/// Smallest k >= 2 with ln L(k) > ln(tau_c * Upsilon / (T+1)).
unsigned find_k_star(long T_star, double tau_c_seconds, double upsilon_flops,
                     const CostModelParams& params = CostModelParams{});

struct DesignSpec {
  PlantModel plant;
  double gamma_c;         // acceptable posterior total variance
  double tau_c_seconds;   // system life span
  double upsilon_flops;   // adversary compute rate
};

struct DesignResult {
  Matrix F_star;
  long T_star = 0;
  unsigned k_star = 0;
  double E_at_T_star = 0.0;
  double spectral_radius = 0.0;
};

DesignResult design(const DesignSpec& spec);

struct CertificateReport {
  bool secure = false;
  long first_violation_T = -1;  // -1 when none
};

/// Exhaustive scan over T in [1, T_star]: no T may have both gamma(T) <
/// gamma_c and tau(T, k) <= tau_c; beyond T_star, tau is monotone in T and
/// already exceeds tau_c at T_star.
CertificateReport certify_secure(const Matrix& a_closed, double gamma_c,
                                 double tau_c_seconds, unsigned key_bits,
                                 long T_star, const CostModelParams& params);

}  // namespace ecdesign

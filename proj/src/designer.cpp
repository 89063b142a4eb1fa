#include "ecdesign/designer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecdesign {

namespace {

void require_full_column_rank(const Matrix& b) {
  Eigen::FullPivLU<Matrix> lu(b);
  if (lu.rank() != b.cols())
    throw std::invalid_argument("input matrix must have full column rank");
}

struct RiccatiStep {
  Matrix P_prev;
  Matrix gain;  // u = K x
};

RiccatiStep riccati_backward(const Matrix& a, const Matrix& b, const Matrix& p) {
  const Matrix btpb = b.transpose() * p * b;
  Eigen::LLT<Matrix> llt(btpb);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("riccati: B'PB not positive definite");
  const Matrix btpa = b.transpose() * p * a;
  const Matrix gain = -llt.solve(btpa);
  const Matrix p_prev = a.transpose() * p * a + (a.transpose() * p * b) * gain +
                        Matrix::Identity(a.rows(), a.cols());
  return {p_prev, gain};
}

}  // namespace

RiccatiSequence riccati_finite(const Matrix& a, const Matrix& b, long horizon) {
  if (a.rows() != a.cols() || b.rows() != a.rows())
    throw std::invalid_argument("riccati_finite: dimension mismatch");
  if (horizon < 1) throw std::invalid_argument("riccati_finite: horizon must be >= 1");
  require_full_column_rank(b);

  RiccatiSequence seq;
  seq.P.resize(horizon + 1);
  seq.gains.resize(horizon);
  seq.P[horizon] = Matrix::Identity(a.rows(), a.cols());
  for (long t = horizon - 1; t >= 0; --t) {
    auto step = riccati_backward(a, b, seq.P[t + 1]);
    seq.P[t] = std::move(step.P_prev);
    seq.gains[t] = std::move(step.gain);
  }
  return seq;
}

Matrix cheap_gain(const Matrix& a, const Matrix& b, double tol, long max_iter) {
  if (a.rows() != a.cols() || b.rows() != a.rows())
    throw std::invalid_argument("cheap_gain: dimension mismatch");
  require_full_column_rank(b);
  if (!is_controllable(a, b))
    throw std::invalid_argument("cheap_gain: (A, B) must be controllable");

  Matrix p = Matrix::Identity(a.rows(), a.cols());
  double diff = std::numeric_limits<double>::infinity();
  for (long iter = 0; iter < max_iter; ++iter) {
    auto step = riccati_backward(a, b, p);
    diff = (step.P_prev - p).cwiseAbs().maxCoeff();
    p = std::move(step.P_prev);
    if (diff < tol) {
      const Matrix gain = riccati_backward(a, b, p).gain;
      const Matrix closed = a + b * gain;
      if (spectral_radius(closed) >= 1.0)
        throw std::runtime_error("cheap_gain: closed loop not Schur");
      return gain;
    }
  }
  throw std::runtime_error("cheap_gain: no convergence; last residual " +
                           std::to_string(diff));
}

Matrix pole_place(const Matrix& a, const Matrix& b,
                  const std::vector<std::complex<double>>& poles) {
  if (b.cols() != 1)
    throw std::invalid_argument("pole_place: single-input systems only");
  const Index n = a.rows();
  if (static_cast<Index>(poles.size()) != n)
    throw std::invalid_argument("pole_place: need exactly n poles");

  Eigen::FullPivLU<Matrix> lu(controllability_matrix(a, b));
  if (lu.rank() != n) throw std::invalid_argument("pole_place: uncontrollable pair");

  // Characteristic polynomial of the target spectrum.
  std::vector<std::complex<double>> coeff = {1.0};
  for (const auto& pole : poles) {
    std::vector<std::complex<double>> next(coeff.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      next[i] += coeff[i];
      next[i + 1] -= coeff[i] * pole;
    }
    coeff = std::move(next);
  }
  std::vector<double> real_coeff(coeff.size());
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (std::abs(coeff[i].imag()) > 1e-9 * (1.0 + std::abs(coeff[i].real())))
      throw std::invalid_argument("pole_place: poles must be closed under conjugation");
    real_coeff[i] = coeff[i].real();
  }

  // phi(A) by Horner, then the Ackermann row.
  Matrix phi = Matrix::Zero(n, n);
  for (double c : real_coeff) phi = phi * a + c * Matrix::Identity(n, n);
  const Matrix ctrb_inv = lu.inverse();
  return -(ctrb_inv.row(n - 1) * phi);
}

long find_T_star(const Matrix& a_closed, double gamma_c, long iteration_cap) {
  if (!(gamma_c > 0.0)) throw std::invalid_argument("find_T_star: gamma_c must be positive");
  const double threshold = static_cast<double>(a_closed.rows()) / gamma_c;
  GramianTraceStream stream(a_closed);
  while (stream.value() <= threshold) {
    if (stream.t() >= iteration_cap)
      throw std::runtime_error("find_T_star: no crossing within " +
                               std::to_string(iteration_cap) + " steps");
    stream.advance();
  }
  return stream.t();
}

unsigned find_k_star(long T_star, double tau_c_seconds, double upsilon_flops,
                     const CostModelParams& params) {
  if (T_star < 0) throw std::invalid_argument("find_k_star: T must be >= 0");
  if (!(tau_c_seconds > 0.0) || !(upsilon_flops > 0.0))
    throw std::invalid_argument("find_k_star: tau_c and Upsilon must be positive");
  const double log_threshold = std::log(tau_c_seconds) + std::log(upsilon_flops) -
                               std::log(static_cast<double>(T_star) + 1.0);
  unsigned k = 2;
  while (subexp_log_cost(k, params) <= log_threshold) ++k;
  return k;
}

DesignResult design(const DesignSpec& spec) {
  if (!(spec.gamma_c > 0.0))
    throw std::invalid_argument("design: gamma_c must be positive");
  DesignResult result;
  result.F_star = cheap_gain(spec.plant.A_p, spec.plant.B_p);
  const Matrix closed = spec.plant.A_p + spec.plant.B_p * result.F_star;
  result.spectral_radius = ecdesign::spectral_radius(closed);
  result.T_star = find_T_star(closed, spec.gamma_c);
  result.k_star = find_k_star(result.T_star, spec.tau_c_seconds, spec.upsilon_flops,
                              gnfs_params(spec.upsilon_flops));
  result.E_at_T_star = gramian_trace_sum(closed, result.T_star);
  return result;
}

CertificateReport certify_secure(const Matrix& a_closed, double gamma_c,
                                 double tau_c_seconds, unsigned key_bits,
                                 long T_star, const CostModelParams& params) {
  const double n = static_cast<double>(a_closed.rows());
  const double log_tau_c = std::log(tau_c_seconds);
  GramianTraceStream stream(a_closed);
  for (long T = 1; T <= T_star; ++T) {
    while (stream.t() < T) stream.advance();
    const double gamma = n / stream.value();
    const double log_tau = sdt_log_seconds(T, key_bits, params);
    if (gamma < gamma_c && log_tau <= log_tau_c) return {false, T};
  }
  // Beyond T_star: tau(T, k) grows with T, so tau > tau_c there iff it
  // already holds at T_star.
  if (sdt_log_seconds(T_star, key_bits, params) <= log_tau_c) return {false, T_star};
  return {true, -1};
}

}  // namespace ecdesign

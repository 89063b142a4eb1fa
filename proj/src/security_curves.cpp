#include "ecdesign/security_curves.hpp"

#include <limits>
#include <stdexcept>

namespace ecdesign {

GramianTraceStream::GramianTraceStream(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols())
    throw std::invalid_argument("gramian trace: matrix must be square");
  const Index n = a_.rows();
  power_ = Matrix::Identity(n, n);  // A^{t-1} at t = 1
  e_ = static_cast<double>(n);      // E(1) = n
  e_prev_ = 0.0;                    // E(0) = 0
  t_ = 1;
}

void GramianTraceStream::advance() {
  power_ = power_ * a_;  // now A^t
  const double next = 2.0 * e_ - e_prev_ + frobenius_sq(power_);
  e_prev_ = e_;
  e_ = next;
  ++t_;
}

double gramian_trace_sum(const Matrix& a, long T) {
  if (T < 1) throw std::invalid_argument("gramian_trace_sum: T must be >= 1");
  GramianTraceStream stream(a);
  while (stream.t() < T) stream.advance();
  return stream.value();
}

double sic_simple(const Matrix& a, long T) {
  const double e = gramian_trace_sum(a, T);
  if (!(e > 0.0)) throw std::runtime_error("sic_simple: trace sum must be positive");
  return static_cast<double>(a.rows()) / e;
}

double sic_general(const Matrix& a, const Matrix& sigma, double lambda_trace,
                   double l_trace, long T) {
  if (T < 1) throw std::invalid_argument("sic_general: T must be >= 1");
  if (a.rows() != a.cols() || sigma.rows() != a.rows() || sigma.cols() != a.rows())
    throw std::invalid_argument("sic_general: dimension mismatch");
  Matrix g = sigma;  // G_0
  double trace_sum = g.trace();
  for (long t = 1; t < T; ++t) {
    g = a * g * a.transpose() + sigma;
    trace_sum += g.trace();
  }
  const double n = static_cast<double>(a.rows());
  const double denom = lambda_trace + l_trace * trace_sum;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return n * n / denom;
}

CostModelParams gnfs_params(double upsilon_flops) {
  CostModelParams p;
  p.upsilon_flops = upsilon_flops;
  return p;
}

double subexp_log_cost(unsigned key_bits, const CostModelParams& params) {
  if (key_bits < 2)
    throw std::invalid_argument("subexp_log_cost: key length must be >= 2 bits");
  if (!(params.v > 0.0 && params.v < 1.0) || !(params.d > 0.0))
    throw std::invalid_argument("subexp_log_cost: invalid cost-model parameters");
  const double ln_eta = key_bits * std::log(2.0);
  return params.d * std::pow(ln_eta, params.v) *
         std::pow(std::log(ln_eta), 1.0 - params.v);
}

GnfsCost gnfs_time(unsigned key_bits, const CostModelParams& params) {
  const double log_flops = subexp_log_cost(key_bits, params);
  GnfsCost cost{log_flops, std::nullopt};
  if (log_flops < 709.0) cost.flops = std::exp(log_flops);  // stays finite
  return cost;
}

double sdt_log_seconds(long T, unsigned key_bits, const CostModelParams& params) {
  if (T < 0) throw std::invalid_argument("sdt: T must be >= 0");
  if (!(params.upsilon_flops > 0.0))
    throw std::invalid_argument("sdt: Upsilon must be positive");
  return std::log(static_cast<double>(T) + 1.0) + subexp_log_cost(key_bits, params) -
         std::log(params.upsilon_flops);
}

double sdt_seconds(long T, unsigned key_bits, const CostModelParams& params) {
  return std::exp(sdt_log_seconds(T, key_bits, params));
}

}  // namespace ecdesign

#pragma once

#include <cmath>
#include <optional>

#include "ecdesign/numerics.hpp"

namespace ecdesign {

// The two security quantities:
//  - the identifying-complexity curve gamma(T, F), a lower bound on the
//    adversary's expected posterior total variance, driven by the trace sum
//    E(T) = sum_{t=0}^{T-1} tr(W_t) of finite-time controllability gramians
//    W_t = sum_{i=0}^{t} A^i (A^i)^T;
//  - the deciphering-time curve tau(T, k) = (T+1) L(k) / Upsilon, built on a
//    subexponential discrete-log cost model L(k).

/// Streams E(T) in O(1) matrix products per step via the three-term
/// recurrence E(T) = 2 E(T-1) - E(T-2) + tr(A^{T-1} (A^{T-1})^T),
/// with E(1) = n and E(0) = 0.
class GramianTraceStream {
 public:
  explicit GramianTraceStream(Matrix a);

  long t() const { return t_; }
  double value() const { return e_; }  // E(t)
  void advance();

 private:
  Matrix a_;
  Matrix power_;  // A^{t-1}
  double e_;
  double e_prev_;
  long t_;
};

/// E(T); requires T >= 1.
double gramian_trace_sum(const Matrix& a, long T);

/// gamma(T, F) = n / E(T) for white unit-shape noise and no prior information.
double sic_simple(const Matrix& a, long T);

/// gamma(T, F) = n^2 / (tr(Lambda) + tr(L) sum_{t<T} tr(G_t)) with the
/// weighted gramian G_t = sum_{i<=t} A^i Sigma (A^i)^T streamed as
/// G_t = A G_{t-1} A^T + Sigma. Reduces to sic_simple when Sigma = s^2 I and
/// tr(Lambda) = 0.
double sic_general(const Matrix& a, const Matrix& sigma, double lambda_trace,
                   double l_trace, long T);

struct CostModelParams {
  double v = 1.0 / 3.0;          // subexponential shape
  double d = 1.9229994270765445; // (64/9)^(1/3), number-field-sieve constant
  double upsilon_flops = 1.0;    // adversary compute rate
};

CostModelParams gnfs_params(double upsilon_flops);

/// ln L(k) for L(k) = exp(d (k ln 2)^v (ln(k ln 2))^(1-v)); requires k >= 2.
double subexp_log_cost(unsigned key_bits, const CostModelParams& params);

struct GnfsCost {
  double log_flops;             // ln L(k), always finite
  std::optional<double> flops;  // L(k) when representable in double
};

GnfsCost gnfs_time(unsigned key_bits, const CostModelParams& params);

/// ln tau(T, k) = ln(T+1) + ln L(k) - ln Upsilon.
double sdt_log_seconds(long T, unsigned key_bits, const CostModelParams& params);

/// tau(T, k) in seconds; +inf if it exceeds double range.
double sdt_seconds(long T, unsigned key_bits, const CostModelParams& params);

}  // namespace ecdesign

#pragma once

#include <vector>

#include "ecdesign/numerics.hpp"

namespace ecdesign {

// Bayesian identification of the closed-loop matrix A from a state record
// {x_0..x_T}. With Gaussian process noise of precision L and a Gaussian prior
// N(mu, Lambda^{-1}) on vec(A), the posterior is Gaussian with
//   Lambda_hat = Lambda + sum_t (x_t (x) I) L (x_t (x) I)^T
//   mu_hat     = Lambda_hat^{-1} (Lambda mu + sum_t (x_t (x) I) L x_{t+1}),
// where the sums run over t = 0..T-1.

struct Prior {
  Vector mu;      // length n^2
  Matrix lambda;  // n^2 x n^2, SPD or exactly zero (no prior information)
};

struct Posterior {
  Vector mu_hat;
  Matrix lambda_hat;
  long sample_count = 0;  // T
};

Prior zero_information_prior(Index n);
Prior identity_prior(Index n);

/// Streaming form: one rank-n update per sample, O(n^4) state.
class PosteriorAccumulator {
 public:
  PosteriorAccumulator(Prior prior, Matrix noise_precision);

  void push(const Vector& x_t, const Vector& x_next);
  long sample_count() const { return count_; }
  const Matrix& lambda_hat() const { return lambda_hat_; }
  Posterior posterior() const;  // solves for mu_hat; throws while singular

 private:
  Matrix lambda_hat_;
  Vector weighted_rhs_;  // Lambda mu + accumulated cross terms
  Matrix L_;
  Index n_;
  long count_ = 0;
};

Posterior bayes_update(const Prior& prior, const std::vector<Vector>& states,
                       const Matrix& noise_precision);

/// Un-vectorize mu_hat (column-stacked) into the n x n estimate.
Matrix estimate_A(const Posterior& post, Index n);

/// tr(Lambda_hat^{-1}); throws "posterior precision singular" when the
/// precision has not yet become numerically SPD.
double total_variance(const Posterior& post);

/// Gaussian credible half-widths z*sqrt(diag(Lambda_hat^{-1})).
Vector ci_half_widths(const Posterior& post, double z = 1.959963984540054);

double estimation_error_sq(const Matrix& A_true, const Posterior& post);

/// Per-realization lower bound n^2 / (tr(Lambda) + tr(L) sum_{t<T} |x_t|^2);
/// returns +inf when the denominator vanishes.
double trajectory_variance_bound(const std::vector<Vector>& states, const Matrix& lambda,
                                 const Matrix& noise_precision, Index n);

}  // namespace ecdesign

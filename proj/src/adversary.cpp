#include "ecdesign/adversary.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecdesign {

namespace {

void check_prior(const Prior& prior, Index n2) {
  if (prior.mu.size() != n2)
    throw std::invalid_argument("prior: mu must have length n^2");
  if (prior.lambda.rows() != n2 || prior.lambda.cols() != n2)
    throw std::invalid_argument("prior: Lambda must be n^2 x n^2");
}

/// Cholesky of Lambda_hat with the zero-prior singularity policy: the factor
/// is usable once the smallest eigenvalue clears 1e-10 * ||Lambda_hat||_max.
Eigen::LLT<Matrix> factor_or_throw(const Matrix& lambda_hat) {
  Eigen::LLT<Matrix> llt(lambda_hat);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("posterior precision singular");
  const double scale = lambda_hat.cwiseAbs().maxCoeff();
  const double eig_min =
      Eigen::SelfAdjointEigenSolver<Matrix>(lambda_hat, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (!(eig_min > 1e-10 * scale))
    throw std::runtime_error("posterior precision singular");
  return llt;
}

}  // namespace

Prior zero_information_prior(Index n) {
  return {Vector::Zero(n * n), Matrix::Zero(n * n, n * n)};
}

Prior identity_prior(Index n) {
  return {Vector::Zero(n * n), Matrix::Identity(n * n, n * n)};
}

PosteriorAccumulator::PosteriorAccumulator(Prior prior, Matrix noise_precision)
    : L_(std::move(noise_precision)) {
  n_ = L_.rows();
  check_prior(prior, n_ * n_);
  lambda_hat_ = prior.lambda;
  weighted_rhs_ = prior.lambda * prior.mu;
}

void PosteriorAccumulator::push(const Vector& x_t, const Vector& x_next) {
  if (x_t.size() != n_ || x_next.size() != n_)
    throw std::invalid_argument("posterior update: state dimension mismatch");
  // (x (x) I) L (x (x) I)^T = (x x^T) (x) L, accumulated blockwise.
  const Vector lx = L_ * x_next;
  for (Index i = 0; i < n_; ++i) {
    for (Index j = 0; j < n_; ++j)
      lambda_hat_.block(i * n_, j * n_, n_, n_) += x_t(i) * x_t(j) * L_;
    weighted_rhs_.segment(i * n_, n_) += x_t(i) * lx;
  }
  ++count_;
}

Posterior PosteriorAccumulator::posterior() const {
  if (count_ == 0 && lambda_hat_.isZero(0.0))
    throw std::runtime_error("posterior precision singular");
  Posterior post;
  post.lambda_hat = lambda_hat_;
  post.sample_count = count_;
  post.mu_hat = factor_or_throw(lambda_hat_).solve(weighted_rhs_);
  return post;
}

Posterior bayes_update(const Prior& prior, const std::vector<Vector>& states,
                       const Matrix& noise_precision) {
  if (states.empty())
    throw std::invalid_argument("bayes_update: need at least one state");
  PosteriorAccumulator acc(prior, noise_precision);
  for (std::size_t t = 0; t + 1 < states.size(); ++t)
    acc.push(states[t], states[t + 1]);
  if (acc.sample_count() == 0) {
    // No transitions: the posterior is the prior itself.
    Posterior post;
    post.mu_hat = prior.mu;
    post.lambda_hat = prior.lambda;
    post.sample_count = 0;
    return post;
  }
  return acc.posterior();
}

Matrix estimate_A(const Posterior& post, Index n) {
  if (post.mu_hat.size() != n * n)
    throw std::invalid_argument("estimate_A: posterior dimension mismatch");
  return unvec(post.mu_hat, n, n);
}

double total_variance(const Posterior& post) {
  const Matrix inv = factor_or_throw(post.lambda_hat)
                         .solve(Matrix::Identity(post.lambda_hat.rows(),
                                                 post.lambda_hat.cols()));
  return inv.trace();
}

Vector ci_half_widths(const Posterior& post, double z) {
  const Matrix inv = factor_or_throw(post.lambda_hat)
                         .solve(Matrix::Identity(post.lambda_hat.rows(),
                                                 post.lambda_hat.cols()));
  return z * inv.diagonal().cwiseMax(0.0).cwiseSqrt();
}

double estimation_error_sq(const Matrix& A_true, const Posterior& post) {
  const Matrix est = estimate_A(post, A_true.rows());
  if (A_true.rows() != A_true.cols())
    throw std::invalid_argument("estimation_error_sq: A must be square");
  return frobenius_sq((A_true - est).eval());
}

double trajectory_variance_bound(const std::vector<Vector>& states, const Matrix& lambda,
                                 const Matrix& noise_precision, Index n) {
  if (states.empty())
    throw std::invalid_argument("trajectory_variance_bound: need at least one state");
  double energy = 0.0;
  for (std::size_t t = 0; t + 1 < states.size(); ++t) energy += states[t].squaredNorm();
  const double denom = lambda.trace() + noise_precision.trace() * energy;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n * n) / denom;
}

}  // namespace ecdesign

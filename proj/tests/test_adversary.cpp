#include <random>

#include "doctest.h"
#include "ecdesign/adversary.hpp"
#include "ecdesign/security_curves.hpp"
#include "ecdesign/simulator.hpp"
#include "oracles.hpp"

using namespace ecdesign;

namespace {

std::vector<Vector> scalar_states(std::initializer_list<double> vals) {
  std::vector<Vector> out;
  for (double v : vals) {
    Vector x(1);
    x << v;
    out.push_back(x);
  }
  return out;
}

PlantModel benchmark_plant() {
  Matrix a(2, 2), b(2, 1), l(2, 2);
  a << 1.0, 0.5, 0.0, -1.2;
  b << 0.0, 1.0;
  l << 1e4, 0.0, 0.0, 1e4;
  return PlantModel(a, b, l);
}

Matrix pole_gain() {
  Matrix f(1, 2);
  f << -0.0398, 0.2;
  return f;
}

}  // namespace

TEST_CASE("scalar hand example: precision 6, mean 2/3") {
  Prior prior{Vector::Zero(1), Matrix::Identity(1, 1)};
  Matrix l(1, 1);
  l << 1.0;
  const Posterior post = bayes_update(prior, scalar_states({1.0, 2.0, 1.0}), l);
  CHECK(post.lambda_hat(0, 0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(post.mu_hat(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(post.sample_count == 2);

  const Matrix est = estimate_A(post, 1);
  CHECK(est(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // the scalar trajectory bound is tight here
  const double bound = trajectory_variance_bound(scalar_states({1.0, 2.0, 1.0}),
                                                 prior.lambda, l, 1);
  CHECK(bound == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(total_variance(post) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("no samples: the posterior echoes the prior") {
  Prior prior{Vector::Ones(4), 2.0 * Matrix::Identity(4, 4)};
  Matrix l = Matrix::Identity(2, 2);
  const Posterior post = bayes_update(prior, {Vector::Zero(2)}, l);
  CHECK(post.sample_count == 0);
  CHECK(post.mu_hat == prior.mu);
  CHECK(post.lambda_hat == prior.lambda);
  CHECK_THROWS_AS(bayes_update(prior, {}, l), std::invalid_argument);
}

TEST_CASE("vec / un-vec round-trip on a random 3x3") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix a(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) a(i, j) = unit(gen);
  Posterior post;
  post.mu_hat = vec_stack(a);
  post.lambda_hat = Matrix::Identity(9, 9);
  CHECK(estimate_A(post, 3) == a);
}

TEST_CASE("total variance on diagonal precisions") {
  Posterior post;
  post.mu_hat = Vector::Zero(2);
  post.lambda_hat = Matrix::Zero(2, 2);
  post.lambda_hat(0, 0) = 2.0;
  post.lambda_hat(1, 1) = 4.0;
  CHECK(total_variance(post) == doctest::Approx(0.75).epsilon(1e-12));

  Posterior eye;
  eye.mu_hat = Vector::Zero(4);
  eye.lambda_hat = Matrix::Identity(4, 4);
  CHECK(total_variance(eye) == doctest::Approx(4.0).epsilon(1e-12));

  // AM-HM: tr(X^{-1}) >= n^2 / tr(X)
  CHECK(total_variance(post) >= 4.0 / post.lambda_hat.trace() - 1e-12);
}

TEST_CASE("estimation error is zero at the truth and nonnegative") {
  Matrix a(2, 2);
  a << 0.3, 0.1, -0.2, 0.5;
  Posterior post;
  post.mu_hat = vec_stack(a);
  post.lambda_hat = Matrix::Identity(4, 4);
  CHECK(estimation_error_sq(a, post) == 0.0);
  post.mu_hat(0) += 0.1;
  CHECK(estimation_error_sq(a, post) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("streaming accumulator matches the batch update") {
  const PlantModel plant = benchmark_plant();
  SimOptions opt;
  opt.steps = 200;
  opt.seed = 31;
  const auto states = run_closed_loop(plant, pole_gain(), opt).trajectory.states;

  Prior prior = identity_prior(2);
  const Posterior batch = bayes_update(prior, states, plant.L);
  PosteriorAccumulator acc(prior, plant.L);
  for (std::size_t t = 0; t + 1 < states.size(); ++t) acc.push(states[t], states[t + 1]);
  const Posterior streamed = acc.posterior();

  CHECK((batch.lambda_hat - streamed.lambda_hat).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((batch.mu_hat - streamed.mu_hat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("chained single-sample updates equal one full update") {
  const PlantModel plant = benchmark_plant();
  SimOptions opt;
  opt.steps = 40;
  opt.seed = 37;
  const auto states = run_closed_loop(plant, pole_gain(), opt).trajectory.states;

  Prior running = identity_prior(2);
  for (std::size_t t = 0; t + 1 < states.size(); ++t) {
    const Posterior step =
        bayes_update(running, {states[t], states[t + 1]}, plant.L);
    running = Prior{step.mu_hat, step.lambda_hat};
  }
  const Posterior full = bayes_update(identity_prior(2), states, plant.L);
  CHECK((running.lambda - full.lambda_hat).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((running.mu - full.mu_hat).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("posterior precision dominates the prior and grows monotonically") {
  const PlantModel plant = benchmark_plant();
  SimOptions opt;
  opt.steps = 100;
  opt.seed = 41;
  const auto states = run_closed_loop(plant, pole_gain(), opt).trajectory.states;

  PosteriorAccumulator acc(identity_prior(2), plant.L);
  Matrix prev = acc.lambda_hat();
  for (std::size_t t = 0; t + 1 < states.size(); ++t) {
    acc.push(states[t], states[t + 1]);
    const Matrix diff = acc.lambda_hat() - prev;
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Matrix>(diff, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    CHECK(min_eig > -1e-9);
    CHECK((acc.lambda_hat() - acc.lambda_hat().transpose()).cwiseAbs().maxCoeff() < 1e-9);
    prev = acc.lambda_hat();
  }
}

TEST_CASE("per-realization bound never exceeds the posterior total variance") {
  const PlantModel plant = benchmark_plant();
  const Prior prior = identity_prior(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SimOptions opt;
    opt.steps = 50;
    opt.seed = seed;
    const auto states = run_closed_loop(plant, pole_gain(), opt).trajectory.states;
    const Posterior post = bayes_update(prior, states, plant.L);
    const double bound = trajectory_variance_bound(states, prior.lambda, plant.L, 2);
    CHECK(bound <= total_variance(post) + 1e-12);
  }
}

TEST_CASE("expected total variance clears the identifying-complexity curve") {
  // Monte-Carlo version of the ensemble bound at T = 50 (small here; the
  // acceptance suite runs the full sweep).
  const PlantModel plant = benchmark_plant();
  const Prior prior = identity_prior(2);
  const Matrix a_closed = plant.A_p + plant.B_p * pole_gain();
  const Matrix sigma = plant.noise_covariance();
  const long T = 50;
  const double gamma =
      sic_general(a_closed, sigma, prior.lambda.trace(), plant.L.trace(), T);
  std::vector<double> tv;
  for (std::uint64_t seed = 100; seed < 200; ++seed) {
    SimOptions opt;
    opt.steps = T;
    opt.seed = seed;
    const auto states = run_closed_loop(plant, pole_gain(), opt).trajectory.states;
    tv.push_back(total_variance(bayes_update(prior, states, plant.L)));
  }
  const double low = oracles::bootstrap_mean_quantile(tv, 0.01, 1000, 9);
  CHECK(low >= gamma);
}

TEST_CASE("zero prior defers inversion until the precision becomes SPD") {
  Prior prior = zero_information_prior(2);
  Matrix l = Matrix::Identity(2, 2);
  PosteriorAccumulator acc(prior, l);
  CHECK_THROWS_WITH_AS(acc.posterior(), "posterior precision singular", std::runtime_error);

  Vector x0(2), x1(2), x2(2), x3(2);
  x0 << 1.0, 0.0;
  x1 << 0.4, 1.0;
  x2 << -0.3, 0.7;
  x3 << 0.2, -0.5;
  acc.push(x0, x1);
  CHECK_THROWS_AS(acc.posterior(), std::runtime_error);  // rank 2 of 4
  acc.push(x1, x2);
  acc.push(x2, x3);
  CHECK_NOTHROW(acc.posterior());
}

TEST_CASE("trajectory bound edge cases") {
  Matrix l(1, 1);
  l << 1.0;
  // T=0 with identity prior: bound is n^2 / tr(Lambda) = 1
  CHECK(trajectory_variance_bound({Vector::Zero(1)}, Matrix::Identity(1, 1), l, 1) ==
        doctest::Approx(1.0));
  // all-zero states and zero prior: +inf documented
  CHECK(std::isinf(
      trajectory_variance_bound({Vector::Zero(1), Vector::Zero(1)}, Matrix::Zero(1, 1), l, 1)));
}

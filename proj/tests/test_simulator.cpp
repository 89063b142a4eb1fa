#include "doctest.h"
#include "ecdesign/simulator.hpp"
#include "oracles.hpp"

using namespace ecdesign;

namespace {

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

TEST_CASE("plant validation: controllability and SPD noise precision") {
  Matrix a(2, 2), b(2, 1), l(2, 2);
  a << 1.0, 0.0, 0.0, 2.0;
  b << 1.0, 0.0;  // second mode unreachable
  l << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(PlantModel(a, b, l), std::invalid_argument);

  Matrix bad_l(2, 2);
  bad_l << 1.0, 2.0, 2.0, 1.0;  // indefinite
  Matrix b_ok(2, 1);
  b_ok << 0.0, 1.0;
  Matrix a_ok(2, 2);
  a_ok << 1.0, 0.5, 0.0, -1.2;
  CHECK_THROWS(PlantModel(a_ok, b_ok, bad_l));
  CHECK_NOTHROW(benchmark_plant());
}

TEST_CASE("sample_noise covariance matches L^{-1}") {
  SUBCASE("isotropic 1e4 precision gives std 0.01 per axis") {
    Matrix l(2, 2);
    l << 1e4, 0.0, 0.0, 1e4;
    NoiseRng rng(42);
    double sum_sq0 = 0.0, sum_sq1 = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const Vector w = sample_noise(l, rng);
      sum_sq0 += w(0) * w(0);
      sum_sq1 += w(1) * w(1);
    }
    CHECK(sum_sq0 / draws == doctest::Approx(1e-4).epsilon(0.05));
    CHECK(sum_sq1 / draws == doctest::Approx(1e-4).epsilon(0.05));
  }
  SUBCASE("anisotropic diagonal precision") {
    Matrix l(2, 2);
    l << 4.0, 0.0, 0.0, 1.0;
    NoiseRng rng(43);
    double sum_sq0 = 0.0, sum_sq1 = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const Vector w = sample_noise(l, rng);
      sum_sq0 += w(0) * w(0);
      sum_sq1 += w(1) * w(1);
    }
    CHECK(sum_sq0 / draws == doctest::Approx(0.25).epsilon(0.05));
    CHECK(sum_sq1 / draws == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("correlated precision reproduces the full covariance") {
    Matrix l(2, 2);
    l << 2.0, 0.6, 0.6, 1.0;
    const Matrix cov = spd_solve(l, Matrix::Identity(2, 2));
    NoiseRng rng(44);
    Matrix acc = Matrix::Zero(2, 2);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
      const Vector w = sample_noise(l, rng);
      acc += w * w.transpose();
    }
    acc /= draws;
    CHECK((acc - cov).cwiseAbs().maxCoeff() < 0.05 * cov.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("zero-noise scalar loop decays geometrically") {
  Matrix a(1, 1), b(1, 1), l(1, 1);
  a << 0.5;
  b << 1.0;
  l << 1.0;
  PlantModel plant(a, b, l);
  SimOptions opt;
  opt.steps = 3;
  opt.zero_noise = true;
  Vector x0(1);
  x0 << 1.0;
  opt.x0 = x0;
  const SimResult res = run_closed_loop(plant, Matrix::Zero(1, 1), opt);
  REQUIRE(res.trajectory.states.size() == 4);
  CHECK(res.trajectory.states[0](0) == 1.0);
  CHECK(res.trajectory.states[1](0) == 0.5);
  CHECK(res.trajectory.states[2](0) == 0.25);
  CHECK(res.trajectory.states[3](0) == 0.125);
  CHECK(res.log.entries.empty());
}

TEST_CASE("equal seeds reproduce the trajectory exactly") {
  const PlantModel plant = benchmark_plant();
  SimOptions opt;
  opt.steps = 50;
  opt.seed = 7;
  const SimResult a = run_closed_loop(plant, pole_gain(), opt);
  const SimResult b = run_closed_loop(plant, pole_gain(), opt);
  REQUIRE(a.trajectory.states.size() == b.trajectory.states.size());
  for (std::size_t t = 0; t < a.trajectory.states.size(); ++t)
    CHECK(a.trajectory.states[t] == b.trajectory.states[t]);

  SimOptions other = opt;
  other.seed = 8;
  const SimResult c = run_closed_loop(plant, pole_gain(), other);
  CHECK(a.trajectory.states[1] != c.trajectory.states[1]);
}

TEST_CASE("encrypted static mode stays within a tight tube around plain mode") {
  const PlantModel plant = benchmark_plant();
  SimOptions plain;
  plain.steps = 100;
  plain.seed = 11;
  const SimResult ref = run_closed_loop(plant, pole_gain(), plain);

  SimOptions enc = plain;
  enc.mode = LoopMode::encrypted_static;
  enc.key_bits = 512;
  enc.delta_gain = 1e-6;
  enc.delta_state = 1e-6;
  const SimResult got = run_closed_loop(plant, pole_gain(), enc);

  REQUIRE(got.trajectory.states.size() == ref.trajectory.states.size());
  double worst = 0.0;
  for (std::size_t t = 0; t < ref.trajectory.states.size(); ++t)
    worst = std::max(worst,
                     (got.trajectory.states[t] - ref.trajectory.states[t]).cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-3);
  CHECK(got.log.entries.size() == 100);
  CHECK(got.log.entries[0].epoch == 0);
  CHECK(got.log.entries[99].epoch == 0);  // static keys never advance
}

TEST_CASE("dynamic mode advances one epoch per step and still tracks plain mode") {
  const PlantModel plant = benchmark_plant();
  SimOptions plain;
  plain.steps = 60;
  plain.seed = 13;
  const SimResult ref = run_closed_loop(plant, pole_gain(), plain);

  SimOptions dyn = plain;
  dyn.mode = LoopMode::encrypted_dynamic;
  dyn.key_bits = 256;
  dyn.delta_gain = 1e-6;
  dyn.delta_state = 1e-6;
  const SimResult got = run_closed_loop(plant, pole_gain(), dyn);

  REQUIRE(got.log.entries.size() == 60);
  for (long t = 0; t < 60; ++t) CHECK(got.log.entries[t].epoch == t);
  // public h rotates every epoch
  CHECK(got.log.entries[0].h != got.log.entries[1].h);

  double worst = 0.0;
  for (std::size_t t = 0; t < ref.trajectory.states.size(); ++t)
    worst = std::max(worst,
                     (got.trajectory.states[t] - ref.trajectory.states[t]).cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-3);
}

TEST_CASE("automatic sensitivity selection closes the loop at k = 256") {
  const PlantModel plant = benchmark_plant();
  SimOptions plain;
  plain.steps = 30;
  plain.seed = 19;
  const SimResult ref = run_closed_loop(plant, pole_gain(), plain);

  SimOptions enc = plain;
  enc.mode = LoopMode::encrypted_static;
  enc.key_bits = 256;  // no explicit deltas: select from key length + bound
  enc.state_bound = 1.0;
  const SimResult got = run_closed_loop(plant, pole_gain(), enc);
  CHECK(got.delta_state > 0.0);
  CHECK(got.delta_state < 1e-30);
  double worst = 0.0;
  for (std::size_t t = 0; t < ref.trajectory.states.size(); ++t)
    worst = std::max(worst,
                     (got.trajectory.states[t] - ref.trajectory.states[t]).cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-9);
}

TEST_CASE("long-run state energy approaches the stationary covariance trace") {
  const PlantModel plant = benchmark_plant();
  const Matrix a_closed = plant.A_p + plant.B_p * pole_gain();
  const Matrix sigma_inf = oracles::lyapunov_series(a_closed, plant.noise_covariance());

  SimOptions opt;
  opt.steps = 60000;
  opt.seed = 17;
  const SimResult res = run_closed_loop(plant, pole_gain(), opt);
  double acc = 0.0;
  long counted = 0;
  for (std::size_t t = 1000; t < res.trajectory.states.size(); ++t) {
    acc += res.trajectory.states[t].squaredNorm();
    ++counted;
  }
  CHECK(acc / counted == doctest::Approx(sigma_inf.trace()).epsilon(0.10));
}

TEST_CASE("overflow during an encrypted run names the failing step") {
  Matrix a(1, 1), b(1, 1), l(1, 1);
  a << 0.99;
  b << 1.0;
  l << 1.0;
  PlantModel plant(a, b, l);
  SimOptions opt;
  opt.mode = LoopMode::encrypted_static;
  opt.key_bits = 8;  // q around 200: products of coarse encodings overflow
  opt.steps = 5;
  opt.zero_noise = true;
  Vector x0(1);
  x0 << 0.9;
  opt.x0 = x0;
  opt.delta_gain = 0.01;
  opt.delta_state = 0.01;
  Matrix f(1, 1);
  f << 0.5;
  try {
    run_closed_loop(plant, f, opt);
    FAIL("expected a plaintext overflow");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("step 0") != std::string::npos);
    CHECK(msg.find("plaintext overflow") != std::string::npos);
  }
}

TEST_CASE("loop mode names round-trip") {
  CHECK(loop_mode_from_string("plain") == LoopMode::plain);
  CHECK(loop_mode_from_string("static") == LoopMode::encrypted_static);
  CHECK(loop_mode_from_string("dynamic") == LoopMode::encrypted_dynamic);
  CHECK(to_string(LoopMode::encrypted_dynamic) == "dynamic");
  CHECK_THROWS_AS(loop_mode_from_string("???"), std::invalid_argument);
}

#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecdesign/adversary.hpp"
#include "ecdesign/bench.hpp"
#include "ecdesign/config.hpp"
#include "ecdesign/csvio.hpp"
#include "ecdesign/designer.hpp"

namespace fs = std::filesystem;
using namespace ecdesign;

namespace {

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

ExperimentConfig load_with_overrides(const GlobalFlags& flags) {
  ExperimentConfig cfg = load_config(flags.config_path);
  if (flags.seed) cfg.sim.seed = *flags.seed;
  if (flags.out_dir) cfg.output.directory = *flags.out_dir;
  return cfg;
}

Matrix controller_gain(const ExperimentConfig& cfg) {
  if (cfg.design.controller == "cheap")
    return cheap_gain(cfg.plant.A_p, cfg.plant.B_p);
  std::vector<std::complex<double>> poles(cfg.design.poles.begin(),
                                          cfg.design.poles.end());
  return pole_place(cfg.plant.A_p, cfg.plant.B_p, poles);
}

CostModelParams cost_params(const ExperimentConfig& cfg) {
  CostModelParams p;
  p.v = cfg.design.cost_v;
  p.d = cfg.design.cost_d;
  p.upsilon_flops = cfg.design.upsilon_flops;
  return p;
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument(std::string(what) + ": expected lo:hi");
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

int cmd_design(const GlobalFlags& flags) {
  const ExperimentConfig cfg = load_with_overrides(flags);
  PlantModel plant(cfg.plant.A_p, cfg.plant.B_p, cfg.plant.L);

  const Matrix gain = controller_gain(cfg);
  const Matrix closed = plant.A_p + plant.B_p * gain;
  const long t_star = find_T_star(closed, cfg.design.gamma_c);
  // Static keys hand every sample to a single break: size the key at T = 0.
  const long key_T = (cfg.crypto.mode == "static") ? 0 : t_star;
  const unsigned k_star = find_k_star(key_T, cfg.design.tau_c_seconds,
                                      cfg.design.upsilon_flops, cost_params(cfg));

  nlohmann::json result;
  result["controller"] = cfg.design.controller;
  result["mode"] = cfg.crypto.mode;
  result["F"] = matrix_json(gain);
  result["T_star"] = t_star;
  result["k_star"] = k_star;
  result["E_at_T_star"] = gramian_trace_sum(closed, t_star);
  result["spectral_radius"] = spectral_radius(closed);
  result["gamma_c"] = cfg.design.gamma_c;
  result["tau_c_seconds"] = cfg.design.tau_c_seconds;
  result["upsilon_flops"] = cfg.design.upsilon_flops;

  const fs::path out = fs::path(cfg.output.directory) / "design_result.json";
  atomic_write_text(out.string(), result.dump(2) + "\n");

  std::cout << "controller (" << cfg.design.controller << "): F = [";
  for (Index j = 0; j < gain.cols(); ++j)
    std::cout << (j ? ", " : "") << format_double(gain(0, j));
  std::cout << "]\n"
            << "critical sample count T* = " << t_star << "\n"
            << "minimum key length  k*  = " << k_star << " bit ("
            << cfg.crypto.mode << " keys)\n"
            << "closed-loop spectral radius = "
            << format_double(spectral_radius(closed)) << "\n"
            << "wrote " << out.string() << "\n";
  return 0;
}

/// Log-spaced (T, E, gamma) sweep down to gamma_lo. The rows at T*-1 and T*
/// that bracket the gamma_c crossing are always included.
void sweep_gain(std::ostringstream& out, const std::string& name, const Matrix& closed,
                double gamma_lo, double gamma_hi, double gamma_c, long t_cap) {
  const double n = static_cast<double>(closed.rows());
  const long t_star = find_T_star(closed, gamma_c, t_cap);
  long t_stop = t_star;
  if (gamma_lo < gamma_c) t_stop = find_T_star(closed, gamma_lo, t_cap);

  std::set<long> emit = {1, t_stop};
  if (t_star > 1) emit.insert(t_star - 1);
  emit.insert(t_star);
  const double ratio = std::pow(static_cast<double>(t_stop), 1.0 / 400.0);
  for (double t = 1.0; t < static_cast<double>(t_stop); t *= std::max(ratio, 1.0001))
    emit.insert(static_cast<long>(t));

  GramianTraceStream stream(closed);
  for (long T : emit) {
    while (stream.t() < T) stream.advance();
    const double gamma = n / stream.value();
    if (gamma > gamma_hi) continue;  // t_stop itself stays: it shows the crossing
    out << name << "," << T << "," << format_double(stream.value()) << ","
        << format_double(gamma) << "," << format_double(gamma_c) << "\n";
  }
}

int cmd_curves(const GlobalFlags& flags, const std::string& gamma_range,
               const std::string& k_range) {
  const ExperimentConfig cfg = load_with_overrides(flags);
  PlantModel plant(cfg.plant.A_p, cfg.plant.B_p, cfg.plant.L);

  double gamma_lo = cfg.design.gamma_c, gamma_hi = 1e300;
  if (!gamma_range.empty()) {
    auto [lo, hi] = parse_range(gamma_range, "--gamma-range");
    gamma_lo = lo;
    gamma_hi = hi;
    if (!(gamma_lo > 0.0) || gamma_hi <= gamma_lo)
      throw std::invalid_argument("--gamma-range: need 0 < lo < hi");
  }
  unsigned k_lo = 2, k_hi = 2048;
  if (!k_range.empty()) {
    auto [lo, hi] = parse_range(k_range, "--k-range");
    k_lo = static_cast<unsigned>(lo);
    k_hi = static_cast<unsigned>(hi);
    if (k_lo < 2) k_lo = 2;
    if (k_hi < k_lo) throw std::invalid_argument("--k-range: hi must be >= lo");
  }

  const Matrix f_cheap = cheap_gain(plant.A_p, plant.B_p);
  const Matrix closed_cheap = plant.A_p + plant.B_p * f_cheap;

  std::optional<Matrix> closed_baseline;
  if (!cfg.design.baseline_poles.empty()) {
    std::vector<std::complex<double>> poles(cfg.design.baseline_poles.begin(),
                                            cfg.design.baseline_poles.end());
    const Matrix f_base = pole_place(plant.A_p, plant.B_p, poles);
    closed_baseline = plant.A_p + plant.B_p * f_base;
  }

  std::ostringstream sic;
  sic << "gain,T,E,gamma,gamma_c\n";
  constexpr long kSweepCap = 100'000'000;
  if (closed_baseline)
    sweep_gain(sic, "pole_baseline", *closed_baseline, gamma_lo, gamma_hi,
               cfg.design.gamma_c, kSweepCap);
  sweep_gain(sic, "cheap", closed_cheap, gamma_lo, gamma_hi, cfg.design.gamma_c,
             kSweepCap);
  const fs::path sic_path = fs::path(cfg.output.directory) / "sic_curves.csv";
  atomic_write_text(sic_path.string(), sic.str());

  const long t_star_cheap = find_T_star(closed_cheap, cfg.design.gamma_c);
  std::optional<long> t_star_base;
  if (closed_baseline) t_star_base = find_T_star(*closed_baseline, cfg.design.gamma_c);

  const CostModelParams params = cost_params(cfg);
  std::ostringstream sdt;
  sdt << "k,log_L_flops,tau_static_s";
  if (t_star_base) sdt << ",tau_dyn_TF_s";
  sdt << ",tau_dyn_TFstar_s,tau_c_s\n";
  for (unsigned k = k_lo; k <= k_hi; ++k) {
    sdt << k << "," << format_double(subexp_log_cost(k, params)) << ","
        << format_double(sdt_seconds(0, k, params));
    if (t_star_base) sdt << "," << format_double(sdt_seconds(*t_star_base, k, params));
    sdt << "," << format_double(sdt_seconds(t_star_cheap, k, params)) << ","
        << format_double(cfg.design.tau_c_seconds) << "\n";
  }
  const fs::path sdt_path = fs::path(cfg.output.directory) / "sdt_curves.csv";
  atomic_write_text(sdt_path.string(), sdt.str());

  std::cout << "T* (cheap) = " << t_star_cheap;
  if (t_star_base) std::cout << ", T* (pole baseline) = " << *t_star_base;
  std::cout << "\nwrote " << sic_path.string() << "\nwrote " << sdt_path.string() << "\n";
  return 0;
}

SimOptions sim_options_from(const ExperimentConfig& cfg) {
  SimOptions opt;
  opt.mode = loop_mode_from_string(cfg.crypto.mode);
  opt.steps = cfg.sim.T;
  opt.seed = cfg.sim.seed;
  opt.zero_noise = cfg.sim.zero_noise;
  if (!cfg.sim.x0.empty()) {
    Vector x0(static_cast<Index>(cfg.sim.x0.size()));
    for (Index i = 0; i < x0.size(); ++i) x0(i) = cfg.sim.x0[i];
    opt.x0 = x0;
  }
  opt.key_bits = cfg.crypto.key_bits;
  if (cfg.crypto.sensitivity) {
    opt.delta_gain = *cfg.crypto.sensitivity;
    opt.delta_state = *cfg.crypto.sensitivity;
  }
  opt.state_bound = cfg.crypto.signal_bound;
  return opt;
}

int cmd_simulate(const GlobalFlags& flags) {
  const ExperimentConfig cfg = load_with_overrides(flags);
  PlantModel plant(cfg.plant.A_p, cfg.plant.B_p, cfg.plant.L);
  const Matrix gain = controller_gain(cfg);

  // run r uses seed + r; run 0 keeps the plain file names
  for (int run = 0; run < cfg.sim.monte_carlo_runs; ++run) {
    SimOptions opt = sim_options_from(cfg);
    opt.seed = cfg.sim.seed + static_cast<std::uint64_t>(run);
    const SimResult res = run_closed_loop(plant, gain, opt);
    const std::string suffix = run == 0 ? "" : "_" + std::to_string(run + 1);

    const fs::path traj_path =
        fs::path(cfg.output.directory) / ("trajectory" + suffix + ".csv");
    write_trajectory_csv(traj_path.string(), res.trajectory);
    std::cout << "wrote " << traj_path.string() << " ("
              << res.trajectory.states.size() << " states, mode " << cfg.crypto.mode
              << ", seed " << opt.seed << ")\n";

    if (opt.mode != LoopMode::plain) {
      const fs::path log_path =
          fs::path(cfg.output.directory) / ("cipherlog" + suffix + ".csv");
      write_cipherlog_csv(log_path.string(), res.log, plant.state_dim());
      std::cout << "wrote " << log_path.string() << " (" << res.log.entries.size()
                << " records, sensitivity " << format_double(res.delta_state) << ")\n";
    }
  }
  return 0;
}

int cmd_attack(const GlobalFlags& flags, std::string trajectory_path) {
  const ExperimentConfig cfg = load_with_overrides(flags);
  PlantModel plant(cfg.plant.A_p, cfg.plant.B_p, cfg.plant.L);
  const Index n = plant.state_dim();

  if (trajectory_path.empty())
    trajectory_path = (fs::path(cfg.output.directory) / "trajectory.csv").string();
  const Trajectory traj = read_trajectory_csv(trajectory_path, n, plant.input_dim());

  Prior prior =
      (cfg.attack.prior == "zero") ? zero_information_prior(n) : identity_prior(n);
  prior.lambda *= cfg.attack.prior_scale;

  std::ostringstream out;
  out << "T";
  for (Index i = 1; i <= n * n; ++i) out << ",mu_" << i;
  for (Index i = 1; i <= n * n; ++i) out << ",ci_" << i;
  out << ",total_variance,trajectory_bound\n";

  PosteriorAccumulator acc(prior, plant.L);
  double energy = 0.0;
  long emitted = 0;
  long first_valid = -1;
  const long t_max = static_cast<long>(traj.states.size()) - 1;
  for (long T = 0; T <= t_max; ++T) {
    if (T > 0) {
      acc.push(traj.states[T - 1], traj.states[T]);
      energy += traj.states[T - 1].squaredNorm();
    }
    try {
      const Posterior post = acc.posterior();
      const Vector ci = ci_half_widths(post);
      const double denom = prior.lambda.trace() + plant.L.trace() * energy;
      out << T;
      for (Index i = 0; i < n * n; ++i) out << "," << format_double(post.mu_hat(i));
      for (Index i = 0; i < n * n; ++i) out << "," << format_double(ci(i));
      out << "," << format_double(total_variance(post)) << ","
          << format_double(denom > 0.0 ? n * n / denom
                                       : std::numeric_limits<double>::infinity())
          << "\n";
      ++emitted;
      if (first_valid < 0) first_valid = T;
    } catch (const std::runtime_error&) {
      // precision still singular at this T; keep accumulating
    }
  }
  if (emitted == 0)
    throw std::runtime_error(
        "posterior precision singular for every T <= " + std::to_string(t_max) +
        "; the zero prior needs more samples than this trajectory provides");

  const fs::path out_path = fs::path(cfg.output.directory) / "posterior.csv";
  atomic_write_text(out_path.string(), out.str());
  std::cout << "wrote " << out_path.string() << " (" << emitted
            << " rows, first valid T = " << first_valid << ")\n";
  return 0;
}

int cmd_bench(const std::vector<unsigned>& key_bits, int trials,
              const std::string& out_dir, std::uint64_t seed) {
  std::ostringstream out;
  out << "k,op,trials,min_ms,mean_ms,max_ms,std_ms\n";
  for (unsigned k : key_bits) {
    if (k < 8) throw std::invalid_argument("bench: key sizes below 8 bits are not useful");
    for (const OpTiming& t : bench_crypto(k, trials, seed)) {
      out << t.key_bits << "," << t.op << "," << t.trials << ","
          << format_double(t.min_ms) << "," << format_double(t.mean_ms) << ","
          << format_double(t.max_ms) << "," << format_double(t.std_ms) << "\n";
    }
    std::cout << "benchmarked k = " << k << "\n";
  }
  const fs::path out_path = fs::path(out_dir) / "bench.csv";
  atomic_write_text(out_path.string(), out.str());
  std::cout << "wrote " << out_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Encrypted-control security design: homomorphic state feedback, "
      "identification curves and key-length optimization"};
  app.footer(
      "Planned commands, not implemented yet: a reverse design (gain under a\n"
      "fixed key length) and a fixed-sample-budget variant (T tied to the\n"
      "life span over the sampling period).");
  app.require_subcommand(1);

  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  std::string out_dir_value;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--seed", seed_value, "override sim.seed");
    sub->add_option("--out-dir", out_dir_value, "override output.directory");
  };
  auto apply_common = [&](CLI::App* sub) {
    if (sub->count("--seed")) flags.seed = seed_value;
    if (sub->count("--out-dir")) flags.out_dir = out_dir_value;
  };

  auto* design = app.add_subcommand("design", "compute F*, T* and k*");
  add_common(design);

  auto* curves = app.add_subcommand(
      "curves", "export identifying-complexity and deciphering-time sweeps");
  add_common(curves);
  std::string gamma_range, k_range;
  curves->add_option("--gamma-range", gamma_range, "gamma sweep bounds lo:hi");
  curves->add_option("--k-range", k_range, "key sweep bounds lo:hi (default 2:2048)");

  auto* simulate = app.add_subcommand(
      "simulate", "run the closed loop and export trajectory + cipher log");
  add_common(simulate);

  auto* attack = app.add_subcommand(
      "attack", "Bayesian identification over an exported trajectory");
  add_common(attack);
  std::string trajectory_path;
  attack->add_option("--trajectory", trajectory_path,
                     "trajectory CSV (default <out-dir>/trajectory.csv)");

  auto* bench = app.add_subcommand("bench", "time Enc/Dec/TK/TC per key size");
  std::vector<unsigned> bench_bits = {641, 734, 1091};
  int bench_trials = 1000;
  std::string bench_out = "out";
  std::uint64_t bench_seed = 0;
  bench->add_option("--key-bits", bench_bits, "key sizes to time")->delimiter(',');
  bench->add_option("--trials", bench_trials, "trials per operation");
  bench->add_option("--out-dir", bench_out, "output directory");
  bench->add_option("--seed", bench_seed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) {
      apply_common(design);
      return cmd_design(flags);
    }
    if (curves->parsed()) {
      apply_common(curves);
      return cmd_curves(flags, gamma_range, k_range);
    }
    if (simulate->parsed()) {
      apply_common(simulate);
      return cmd_simulate(flags);
    }
    if (attack->parsed()) {
      apply_common(attack);
      return cmd_attack(flags, trajectory_path);
    }
    if (bench->parsed())
      return cmd_bench(bench_bits, bench_trials, bench_out, bench_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

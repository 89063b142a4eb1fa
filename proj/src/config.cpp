#include "ecdesign/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ecdesign {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config: " + field + ": " + why);
}

Matrix matrix_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const auto& first = j.at(0);
  if (!first.is_array() || first.empty()) fail(field, "rows must be non-empty arrays");
  Matrix m(j.size(), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j.at(i);
    if (!row.is_array() || row.size() != first.size())
      fail(field, "row " + std::to_string(i) + " has inconsistent length");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row.at(k).is_number()) fail(field, "entries must be numbers");
      m(i, k) = row.at(k).get<double>();
    }
  }
  return m;
}

json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

template <typename T>
T get_required(const json& j, const std::string& section, const std::string& name) {
  if (!j.contains(name)) fail(section + "." + name, "missing required field");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    fail(section + "." + name, "wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& section, const std::string& name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    fail(section + "." + name, "wrong type");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }

  ExperimentConfig cfg;

  if (!root.contains("plant")) fail("plant", "missing required section");
  const json& plant = root.at("plant");
  if (!plant.contains("A_p")) fail("plant.A_p", "missing required field");
  if (!plant.contains("B_p")) fail("plant.B_p", "missing required field");
  if (!plant.contains("L")) fail("plant.L", "missing required field");
  cfg.plant.A_p = matrix_from(plant.at("A_p"), "plant.A_p");
  cfg.plant.B_p = matrix_from(plant.at("B_p"), "plant.B_p");
  cfg.plant.L = matrix_from(plant.at("L"), "plant.L");

  if (!root.contains("design")) fail("design", "missing required section");
  const json& design = root.at("design");
  cfg.design.gamma_c = get_required<double>(design, "design", "gamma_c");
  cfg.design.tau_c_seconds = get_required<double>(design, "design", "tau_c_seconds");
  cfg.design.upsilon_flops = get_required<double>(design, "design", "upsilon_flops");
  cfg.design.controller = get_or<std::string>(design, "design", "controller", "cheap");
  cfg.design.poles = get_or<std::vector<double>>(design, "design", "poles", {});
  cfg.design.baseline_poles =
      get_or<std::vector<double>>(design, "design", "baseline_poles", {});
  if (design.contains("cost_model")) {
    const json& cm = design.at("cost_model");
    cfg.design.cost_v = get_or<double>(cm, "design.cost_model", "v", cfg.design.cost_v);
    cfg.design.cost_d = get_or<double>(cm, "design.cost_model", "d", cfg.design.cost_d);
  }

  const json crypto = root.contains("crypto") ? root.at("crypto") : json::object();
  cfg.crypto.mode = get_or<std::string>(crypto, "crypto", "mode", "plain");
  cfg.crypto.key_bits = get_or<unsigned>(crypto, "crypto", "key_bits", 512u);
  if (crypto.contains("sensitivity")) {
    if (crypto.at("sensitivity").is_string()) {
      if (crypto.at("sensitivity").get<std::string>() != "auto")
        fail("crypto.sensitivity", "expected a number or \"auto\"");
    } else if (crypto.at("sensitivity").is_number()) {
      cfg.crypto.sensitivity = crypto.at("sensitivity").get<double>();
    } else {
      fail("crypto.sensitivity", "expected a number or \"auto\"");
    }
  }
  cfg.crypto.signal_bound = get_or<double>(crypto, "crypto", "signal_bound", 1.0);

  const json sim = root.contains("sim") ? root.at("sim") : json::object();
  cfg.sim.T = get_or<long>(sim, "sim", "T", 100L);
  cfg.sim.seed = get_or<std::uint64_t>(sim, "sim", "seed", 0ULL);
  cfg.sim.monte_carlo_runs = get_or<int>(sim, "sim", "monte_carlo_runs", 1);
  cfg.sim.zero_noise = get_or<bool>(sim, "sim", "zero_noise", false);
  cfg.sim.x0 = get_or<std::vector<double>>(sim, "sim", "x0", {});

  const json attack = root.contains("attack") ? root.at("attack") : json::object();
  cfg.attack.prior = get_or<std::string>(attack, "attack", "prior", "identity");
  cfg.attack.prior_scale = get_or<double>(attack, "attack", "prior_scale", 1.0);

  const json output = root.contains("output") ? root.at("output") : json::object();
  cfg.output.directory = get_or<std::string>(output, "output", "directory", "out");
  cfg.output.formats =
      get_or<std::vector<std::string>>(output, "output", "formats", {"csv"});

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json root;
  root["plant"]["A_p"] = matrix_to(cfg.plant.A_p);
  root["plant"]["B_p"] = matrix_to(cfg.plant.B_p);
  root["plant"]["L"] = matrix_to(cfg.plant.L);
  root["design"]["gamma_c"] = cfg.design.gamma_c;
  root["design"]["tau_c_seconds"] = cfg.design.tau_c_seconds;
  root["design"]["upsilon_flops"] = cfg.design.upsilon_flops;
  root["design"]["controller"] = cfg.design.controller;
  if (!cfg.design.poles.empty()) root["design"]["poles"] = cfg.design.poles;
  if (!cfg.design.baseline_poles.empty())
    root["design"]["baseline_poles"] = cfg.design.baseline_poles;
  root["design"]["cost_model"]["v"] = cfg.design.cost_v;
  root["design"]["cost_model"]["d"] = cfg.design.cost_d;
  root["crypto"]["mode"] = cfg.crypto.mode;
  root["crypto"]["key_bits"] = cfg.crypto.key_bits;
  if (cfg.crypto.sensitivity)
    root["crypto"]["sensitivity"] = *cfg.crypto.sensitivity;
  else
    root["crypto"]["sensitivity"] = "auto";
  root["crypto"]["signal_bound"] = cfg.crypto.signal_bound;
  root["sim"]["T"] = cfg.sim.T;
  root["sim"]["seed"] = cfg.sim.seed;
  root["sim"]["monte_carlo_runs"] = cfg.sim.monte_carlo_runs;
  root["sim"]["zero_noise"] = cfg.sim.zero_noise;
  if (!cfg.sim.x0.empty()) root["sim"]["x0"] = cfg.sim.x0;
  root["attack"]["prior"] = cfg.attack.prior;
  root["attack"]["prior_scale"] = cfg.attack.prior_scale;
  root["output"]["directory"] = cfg.output.directory;
  root["output"]["formats"] = cfg.output.formats;
  return root.dump(2) + "\n";
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write '" + path + "'");
  out << serialize_config(cfg);
}

void validate(const ExperimentConfig& cfg) {
  const Index n = cfg.plant.A_p.rows();
  if (cfg.plant.A_p.cols() != n) fail("plant.A_p", "must be square");
  if (cfg.plant.B_p.rows() != n) fail("plant.B_p", "row count must match A_p");
  if (cfg.plant.L.rows() != n || cfg.plant.L.cols() != n)
    fail("plant.L", "must be n x n");
  if (!(cfg.design.gamma_c > 0.0)) fail("design.gamma_c", "must be positive");
  if (!(cfg.design.tau_c_seconds > 0.0)) fail("design.tau_c_seconds", "must be positive");
  if (!(cfg.design.upsilon_flops > 0.0)) fail("design.upsilon_flops", "must be positive");
  if (cfg.design.controller != "cheap" && cfg.design.controller != "poles")
    fail("design.controller", "expected \"cheap\" or \"poles\"");
  if (cfg.design.controller == "poles" &&
      static_cast<Index>(cfg.design.poles.size()) != n)
    fail("design.poles", "need exactly n poles");
  if (!(cfg.design.cost_v > 0.0 && cfg.design.cost_v < 1.0))
    fail("design.cost_model.v", "must lie in (0, 1)");
  if (!(cfg.design.cost_d > 0.0)) fail("design.cost_model.d", "must be positive");
  if (!cfg.design.baseline_poles.empty() &&
      static_cast<Index>(cfg.design.baseline_poles.size()) != n)
    fail("design.baseline_poles", "need exactly n poles");
  if (cfg.crypto.mode != "plain" && cfg.crypto.mode != "static" &&
      cfg.crypto.mode != "dynamic")
    fail("crypto.mode", "expected \"plain\", \"static\" or \"dynamic\"");
  if (cfg.crypto.key_bits < 3) fail("crypto.key_bits", "must be >= 3");
  if (cfg.crypto.sensitivity && !(*cfg.crypto.sensitivity > 0.0))
    fail("crypto.sensitivity", "must be positive");
  if (!(cfg.crypto.signal_bound > 0.0)) fail("crypto.signal_bound", "must be positive");
  if (cfg.sim.T < 0) fail("sim.T", "must be >= 0");
  if (cfg.sim.monte_carlo_runs < 1) fail("sim.monte_carlo_runs", "must be >= 1");
  if (!cfg.sim.x0.empty() && static_cast<Index>(cfg.sim.x0.size()) != n)
    fail("sim.x0", "length must match the state dimension");
  if (cfg.attack.prior != "identity" && cfg.attack.prior != "zero")
    fail("attack.prior", "expected \"identity\" or \"zero\"");
  if (!(cfg.attack.prior_scale > 0.0)) fail("attack.prior_scale", "must be positive");
  if (cfg.output.directory.empty()) fail("output.directory", "must not be empty");
}

}  // namespace ecdesign

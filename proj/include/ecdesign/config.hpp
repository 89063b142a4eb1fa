#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecdesign/numerics.hpp"

namespace ecdesign {

// JSON experiment configuration shared by all CLI commands. See the README
// for the schema; validation errors name the offending field.

struct PlantConfig {
  Matrix A_p;
  Matrix B_p;
  Matrix L;
};

struct DesignConfig {
  double gamma_c = 0.0;
  double tau_c_seconds = 0.0;
  double upsilon_flops = 0.0;
  std::string controller = "cheap";  // "cheap" | "poles"
  std::vector<double> poles;         // used when controller == "poles"
  std::vector<double> baseline_poles;  // optional comparison gain for curves
  // subexponential attack-cost shape; defaults are the number-field-sieve
  // constants, overridable for other cryptosystems
  double cost_v = 1.0 / 3.0;
  double cost_d = 1.9229994270765445;
};

struct CryptoConfig {
  std::string mode = "plain";  // "plain" | "static" | "dynamic"
  unsigned key_bits = 512;
  std::optional<double> sensitivity;  // absent = auto-select
  double signal_bound = 1.0;
};

struct SimConfig {
  long T = 100;
  std::uint64_t seed = 0;
  int monte_carlo_runs = 1;
  bool zero_noise = false;
  std::vector<double> x0;  // empty = sample from the stationary noise law
};

struct AttackConfig {
  std::string prior = "identity";  // "identity" | "zero"
  double prior_scale = 1.0;        // Lambda = prior_scale * I
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv"};
};

struct ExperimentConfig {
  PlantConfig plant;
  DesignConfig design;
  CryptoConfig crypto;
  SimConfig sim;
  AttackConfig attack;
  OutputConfig output;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& config);
void save_config(const std::string& path, const ExperimentConfig& config);

/// Cross-block dimensional and positivity checks; throws with the field name.
void validate(const ExperimentConfig& config);

}  // namespace ecdesign

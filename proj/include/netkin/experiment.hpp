#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "netkin/kernels.hpp"

namespace netkin {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One reproducible experiment: model, parameters, seed range and requested
// analyses. A persisted config re-runs to byte-identical distribution files.
struct ExperimentConfig {
  std::string model = "gn";  // gn | wg | mg

  // gn kernel
  std::string kernel_kind = "power";  // constant | power | shifted | attractive
  double gamma = 1.0;
  double shift = 0.0;
  std::string eta_dist = "point:1.0";  // point:v | uniform:a,b | cutoff:max,omega
  std::string sampler = "auto";        // auto | classes | endpoints

  // wg / mg
  double p = 0.5;
  double lambda_in = 1.0;
  double lambda_out = 1.0;

  std::uint64_t steps = 100000;
  std::uint64_t seed_base = 1;
  std::uint32_t n_seeds = 1;
  int jobs = 1;
  std::vector<std::string> analyses;  // model default applies when empty
  std::string format = "csv";
  std::string out_dir = "out";
  bool check = false;
  double z_tol = 4.0;

  void validate() const;  // throws ConfigError
  KernelSpec kernel() const;
  AttractivenessDist parse_eta_dist() const;
  std::vector<std::uint64_t> seeds() const;
  std::vector<std::string> effective_analyses() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  std::string config_hash() const;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 failed --check, 2 config error
  std::vector<std::string> failed_checks;
  nlohmann::json report;
};

// Runs all seeds (optionally in parallel), writes per-seed and aggregated
// distribution files, theory tables, comparison reports and a manifest.
RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

// Re-runs a manifest's config and byte-compares the regenerated distribution
// files against the recorded ones. Exit 0 on identical outputs, 1 on
// differences (flagged), 2 on missing files or unreadable manifest. A tool
// version mismatch downgrades differences to warnings.
int replay_manifest(const std::string& manifest_path, std::ostream& log);

}  // namespace netkin

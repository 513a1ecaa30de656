#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wl/analysis.hpp"
#include "wl/chain.hpp"
#include "wl/kernel.hpp"
#include "wl/model.hpp"
#include "wl/schedule.hpp"
#include "wl/updates.hpp"

namespace wl {
namespace harness {

// A fully validated experiment: every component has already passed its module
// constructor, so a run cannot fail on bad parameters after load.
struct ExperimentConfig {
  ExperimentConfig(TargetModel m, ProposalSpec p, ScheduleSpec s)
      : model(std::move(m)), proposal(p), schedule(s) {}

  TargetModel model;
  ProposalSpec proposal;
  ScheduleSpec schedule;
  UpdateRule update_rule = UpdateRule::Linearized;
  std::uint64_t n_steps = 0;
  int replicates = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t thinning = 1;
  std::string outputs = "out";
  std::optional<std::vector<double>> theta0;
  std::optional<State> x0;
  int workers = 0;  // 0 = one per hardware thread
  bool write_replicate_traces = false;
  std::optional<std::string> oracle_path;
  std::uint64_t stability_burn_in = 1000;

  std::string config_digest;  // FNV-1a of the canonical config document
};

// Strict schema: unknown keys are rejected, every error names its field path.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

struct RunSummary {
  std::uint64_t seed = 0;
  std::uint64_t n_steps = 0;
  std::vector<double> theta_star;
  std::vector<double> final_theta;
  double l1_error = 0.0;
  double lyapunov_final = 0.0;
  double min_theta_overall = 1.0;       // over all steps n >= 1
  double min_theta_after_burnin = 1.0;  // over steps n >= stability_burn_in
  std::vector<double> occupancy;        // stratum frequencies over all steps
  std::vector<double> polyak_theta;     // (1/n) sum theta_k, full resolution
  double wall_clock_seconds = 0.0;
};

struct OracleComparison {
  bool clt_applicable = false;
  double sigma2 = 0.0;
  double frob_rel_gamma_scaled = 0.0;    // vs sigma^2 U_star
  std::optional<double> frob_rel_sqrt_n; // alpha = 1 only, vs gamma_star sigma^2 U_star
  double frob_rel_polyak = 0.0;          // vs d^2 U_star
};

struct EnsembleSummary {
  int replicates = 0;
  std::uint64_t n_steps = 0;
  double gamma_n = 0.0;  // step size at n_steps, the gamma^-1 normalization
  std::vector<double> theta_star;
  std::vector<double> mean_final_theta;
  std::vector<double> mean_polyak_theta;
  Eigen::MatrixXd cov_gamma_scaled;   // Cov of gamma_n^{-1/2} (theta_n - theta_star)
  Eigen::MatrixXd cov_sqrt_n_scaled;  // Cov of sqrt(n)     (theta_n - theta_star)
  Eigen::MatrixXd cov_polyak_sqrt_n;  // Cov of sqrt(n) (polyak mean - theta_star)
  std::optional<OracleComparison> oracle_comparison;
};

// Executes one chain and writes <outputs>/trace.csv and <outputs>/summary.json.
// Bit-identical artifacts for identical (config, seed), except the wall-clock
// field of the summary.
RunSummary run_single(const ExperimentConfig& config);

// Runs R >= 2 independent chains (seeds derived via replicate_seed), reduces
// deterministically in replicate order, writes <outputs>/ensemble.json.
// seeds_override is a test hook.
EnsembleSummary run_replicates(const ExperimentConfig& config,
                               const std::optional<std::vector<std::uint64_t>>& seeds_override =
                                   std::nullopt);

// Writes <outputs>/oracle.json: theta_star for any model; U_star, rho and the
// Poisson data additionally for discrete models (they have no exact torus
// counterpart). Returns the document.
nlohmann::json compute_oracle(const ExperimentConfig& config);

nlohmann::json summary_to_json(const RunSummary& summary, const ExperimentConfig& config);
nlohmann::json ensemble_to_json(const EnsembleSummary& ensemble, const ExperimentConfig& config);

std::string config_digest(const nlohmann::json& doc);

}  // namespace harness
}  // namespace wl

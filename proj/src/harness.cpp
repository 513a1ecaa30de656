#include "wl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include "wl/rng.hpp"
#include "wl/version.hpp"

namespace wl {
namespace harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError("config: " + path + ": " + message);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key (strict schema)");
    }
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "required key missing");
  return *it;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t get_u64(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

TargetModel build_model(const json& m) {
  if (!m.is_object()) fail("model", "expected an object");
  if (m.contains("name")) {
    const std::string name = require(m, "model", "name").get<std::string>();
    if (name == "discrete-flat" || name == "discrete-skew") {
      check_keys(m, "model", {"name", "K", "d"});
      const int K = m.contains("K") ? get_int(m["K"], "model.K") : 4;
      const int d = m.contains("d") ? get_int(m["d"], "model.d") : 2;
      return name == "discrete-flat" ? make_discrete_flat(K, d) : make_discrete_skew(K, d);
    }
    if (name == "torus-doublewell") {
      check_keys(m, "model", {"name", "beta", "d"});
      const double beta = m.contains("beta") ? get_number(m["beta"], "model.beta") : 1.0;
      const int d = m.contains("d") ? get_int(m["d"], "model.d") : 4;
      return make_torus_doublewell(beta, d);
    }
    fail("model.name", "unknown built-in model \"" + name + "\"");
  }
  const std::string kind = require(m, "model", "kind").get<std::string>();
  if (kind == "discrete") {
    check_keys(m, "model", {"kind", "log_weights", "strata"});
    const auto log_weights = require(m, "model", "log_weights").get<std::vector<double>>();
    const auto strata = require(m, "model", "strata").get<std::vector<int>>();
    return TargetModel::discrete(log_weights, Stratification::explicit_map(strata),
                                 "inline-discrete");
  }
  if (kind == "torus") {
    check_keys(m, "model", {"kind", "beta", "harmonics", "d", "bins"});
    const double beta = m.contains("beta") ? get_number(m["beta"], "model.beta") : 1.0;
    const int harmonics = m.contains("harmonics") ? get_int(m["harmonics"], "model.harmonics") : 2;
    Stratification strat = m.contains("bins")
        ? Stratification::bin_edges(m["bins"].get<std::vector<double>>())
        : Stratification::uniform_bins(m.contains("d") ? get_int(m["d"], "model.d") : 4);
    return make_torus_cosine(beta, harmonics, std::move(strat));
  }
  fail("model.kind", "expected \"discrete\" or \"torus\"");
}

ProposalSpec build_proposal(const json* p, const TargetModel& model) {
  const bool discrete = model.kind() == SpaceKind::DiscreteFinite;
  if (p == nullptr) {
    return discrete ? ProposalSpec::discrete_mix(1, 0.05) : ProposalSpec::torus_mix(0.1, 0.05);
  }
  if (discrete) {
    check_keys(*p, "proposal", {"local_radius", "global_prob"});
    const int r = p->contains("local_radius") ? get_int((*p)["local_radius"], "proposal.local_radius") : 1;
    const double eps = p->contains("global_prob") ? get_number((*p)["global_prob"], "proposal.global_prob") : 0.05;
    return ProposalSpec::discrete_mix(r, eps);
  }
  check_keys(*p, "proposal", {"local_halfwidth", "global_prob"});
  const double delta = p->contains("local_halfwidth") ? get_number((*p)["local_halfwidth"], "proposal.local_halfwidth") : 0.1;
  const double eps = p->contains("global_prob") ? get_number((*p)["global_prob"], "proposal.global_prob") : 0.05;
  return ProposalSpec::torus_mix(delta, eps);
}

ScheduleSpec build_schedule(const json& s) {
  check_keys(s, "schedule", {"gamma_star", "alpha", "gamma_cap"});
  const double gamma_star = get_number(require(s, "schedule", "gamma_star"), "schedule.gamma_star");
  const double alpha = get_number(require(s, "schedule", "alpha"), "schedule.alpha");
  std::optional<double> cap;
  if (s.contains("gamma_cap")) cap = get_number(s["gamma_cap"], "schedule.gamma_cap");
  try {
    return ScheduleSpec(gamma_star, alpha, cap);
  } catch (const ValidationError& e) {
    fail("schedule", e.what());
  }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Streams thinned trace rows: steps that are multiples of the stride plus the
// final step, so the file holds ceil(n_steps / thinning) data rows.
class TraceWriter {
 public:
  TraceWriter(const fs::path& path, const TargetModel& model, const ScheduleSpec& schedule,
              const WeightVector& theta_star, std::uint64_t stride, std::uint64_t n_steps)
      : model_(model), schedule_(schedule), theta_star_(theta_star.values()), stride_(stride),
        n_steps_(n_steps), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open trace file " + path.string());
    out_ << "n,x,stratum";
    for (int i = 0; i < model.num_strata(); ++i) out_ << ",theta_" << i;
    out_ << ",min_theta,V,gamma\n";
  }

  void operator()(std::uint64_t n, State x, const std::vector<double>& theta) {
    if (n % stride_ != 0 && n != n_steps_) return;
    char buf[64];
    out_ << n << ',';
    if (model_.kind() == SpaceKind::DiscreteFinite) {
      out_ << static_cast<long long>(x.v);
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", x.v);
      out_ << buf;
    }
    out_ << ',' << model_.stratum_unchecked(x);
    double min_theta = 1.0;
    double lyap = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", theta[i]);
      out_ << buf;
      min_theta = std::min(min_theta, theta[i]);
      lyap += theta_star_[i] * std::log(theta_star_[i] / theta[i]);
    }
    std::snprintf(buf, sizeof(buf), ",%.17g", min_theta);
    out_ << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", lyap);
    out_ << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", schedule_.gamma(n));
    out_ << buf << '\n';
  }

  void close() { out_.close(); }

 private:
  const TargetModel& model_;
  const ScheduleSpec& schedule_;
  std::vector<double> theta_star_;
  std::uint64_t stride_;
  std::uint64_t n_steps_;
  std::ofstream out_;
};

// Full-resolution per-run statistics; trace thinning never touches these.
struct Accumulator {
  explicit Accumulator(const TargetModel& model, std::uint64_t burn_in)
      : model(&model), burn_in(burn_in),
        occupancy(static_cast<std::size_t>(model.num_strata()), 0),
        polyak_sum(static_cast<std::size_t>(model.num_strata()), 0.0) {}

  void operator()(std::uint64_t n, State x, const std::vector<double>& theta) {
    ++occupancy[static_cast<std::size_t>(model->stratum_unchecked(x))];
    double min_theta = 1.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      min_theta = std::min(min_theta, theta[i]);
      polyak_sum[i] += theta[i];
    }
    min_overall = std::min(min_overall, min_theta);
    if (n >= burn_in) min_after_burnin = std::min(min_after_burnin, min_theta);
  }

  const TargetModel* model;
  std::uint64_t burn_in;
  std::vector<std::uint64_t> occupancy;
  std::vector<double> polyak_sum;
  double min_overall = 1.0;
  double min_after_burnin = 1.0;
};

RunSummary run_chain(const ExperimentConfig& config, std::uint64_t seed,
                     const WeightVector& theta_star, const std::optional<fs::path>& trace_path) {
  std::optional<WeightVector> theta0;
  if (config.theta0) theta0 = WeightVector(*config.theta0);
  ChainState chain = make_chain_state(config.model, seed, theta0, config.x0);

  Accumulator acc(config.model, config.stability_burn_in);
  std::optional<TraceWriter> trace;
  std::vector<StepObserver> observers;
  observers.push_back([&acc](std::uint64_t n, State x, const std::vector<double>& theta) {
    acc(n, x, theta);
  });
  if (trace_path) {
    trace.emplace(*trace_path, config.model, config.schedule, theta_star, config.thinning,
                  config.n_steps);
    observers.push_back([&trace](std::uint64_t n, State x, const std::vector<double>& theta) {
      (*trace)(n, x, theta);
    });
  }

  const auto start = std::chrono::steady_clock::now();
  chain = wl_iterate(std::move(chain), config.model, config.proposal, config.schedule,
                     config.update_rule, config.n_steps, observers);
  const auto stop = std::chrono::steady_clock::now();
  if (trace) trace->close();

  RunSummary summary;
  summary.seed = seed;
  summary.n_steps = config.n_steps;
  summary.theta_star = theta_star.values();
  summary.final_theta = chain.theta;
  summary.l1_error = WeightVector(chain.theta).l1_distance(theta_star);
  summary.lyapunov_final = lyapunov(WeightVector(chain.theta), theta_star);
  summary.min_theta_overall = acc.min_overall;
  summary.min_theta_after_burnin = acc.min_after_burnin;
  summary.occupancy.assign(acc.occupancy.size(), 0.0);
  if (config.n_steps > 0) {
    for (std::size_t i = 0; i < acc.occupancy.size(); ++i) {
      summary.occupancy[i] =
          static_cast<double>(acc.occupancy[i]) / static_cast<double>(config.n_steps);
    }
  }
  summary.polyak_theta.assign(acc.polyak_sum.size(), 0.0);
  if (config.n_steps > 0) {
    for (std::size_t i = 0; i < acc.polyak_sum.size(); ++i) {
      summary.polyak_theta[i] = acc.polyak_sum[i] / static_cast<double>(config.n_steps);
    }
  } else {
    summary.polyak_theta = chain.theta;  // empty history: report theta_0
    summary.min_theta_overall = *std::min_element(chain.theta.begin(), chain.theta.end());
    summary.min_theta_after_burnin = summary.min_theta_overall;
  }
  summary.wall_clock_seconds = std::chrono::duration<double>(stop - start).count();
  return summary;
}

}  // namespace

std::string config_digest(const json& doc) {
  const std::string data = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config: expected a JSON object");
  check_keys(doc, "", {"schema", "model", "proposal", "schedule", "update_rule", "n_steps",
                       "replicates", "master_seed", "thinning", "outputs", "theta0", "x0",
                       "workers", "write_replicate_traces", "oracle", "stability_burn_in"});

  TargetModel model = build_model(require(doc, "", "model"));
  const json* proposal_json = doc.contains("proposal") ? &doc["proposal"] : nullptr;
  ProposalSpec proposal = build_proposal(proposal_json, model);
  ScheduleSpec schedule = build_schedule(require(doc, "", "schedule"));

  ExperimentConfig config(std::move(model), proposal, schedule);
  config.n_steps = get_u64(require(doc, "", "n_steps"), "n_steps");

  if (doc.contains("update_rule")) {
    const std::string rule = doc["update_rule"].get<std::string>();
    if (rule == "linearized") {
      config.update_rule = UpdateRule::Linearized;
    } else if (rule == "standard") {
      config.update_rule = UpdateRule::Standard;
    } else {
      fail("update_rule", "expected \"linearized\" or \"standard\"");
    }
  }
  if (doc.contains("replicates")) {
    config.replicates = get_int(doc["replicates"], "replicates");
    if (config.replicates < 1) fail("replicates", "must be >= 1");
  }
  if (doc.contains("master_seed")) config.master_seed = get_u64(doc["master_seed"], "master_seed");
  if (doc.contains("thinning")) {
    config.thinning = get_u64(doc["thinning"], "thinning");
    if (config.thinning < 1) fail("thinning", "must be >= 1");
  } else {
    config.thinning = std::max<std::uint64_t>(1, config.n_steps / 100000);
  }
  if (doc.contains("outputs")) config.outputs = doc["outputs"].get<std::string>();
  if (doc.contains("theta0")) {
    const auto theta0 = doc["theta0"].get<std::vector<double>>();
    try {
      WeightVector check(theta0);
      if (check.dim() != config.model.num_strata()) fail("theta0", "dimension must equal d");
    } catch (const ValidationError& e) {
      fail("theta0", e.what());
    }
    config.theta0 = theta0;
  }
  if (doc.contains("x0")) {
    const double x0 = get_number(doc["x0"], "x0");
    State state = config.model.kind() == SpaceKind::Torus1D ? torus_state(x0) : State{x0};
    try {
      config.model.check_state(state);
    } catch (const DomainError& e) {
      fail("x0", e.what());
    }
    config.x0 = state;
  }
  if (doc.contains("workers")) {
    config.workers = get_int(doc["workers"], "workers");
    if (config.workers < 0) fail("workers", "must be >= 0");
  }
  if (doc.contains("write_replicate_traces")) {
    config.write_replicate_traces = doc["write_replicate_traces"].get<bool>();
  }
  if (doc.contains("oracle")) config.oracle_path = doc["oracle"].get<std::string>();
  if (doc.contains("stability_burn_in")) {
    config.stability_burn_in = get_u64(doc["stability_burn_in"], "stability_burn_in");
  }
  config.config_digest = config_digest(doc);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
  return config_from_json(doc);
}

json summary_to_json(const RunSummary& summary, const ExperimentConfig& config) {
  json j;
  j["schema"] = "wl/1";
  j["code_version"] = kVersion;
  j["config_digest"] = config.config_digest;
  j["model"] = {{"description", config.model.description()},
                {"digest", config.model.digest()},
                {"d", config.model.num_strata()}};
  j["seed"] = summary.seed;
  j["n_steps"] = summary.n_steps;
  j["thinning"] = config.thinning;
  j["update_rule"] = config.update_rule == UpdateRule::Linearized ? "linearized" : "standard";
  j["theta_star"] = summary.theta_star;
  j["final_theta"] = summary.final_theta;
  j["l1_error"] = summary.l1_error;
  j["lyapunov"] = summary.lyapunov_final;
  j["min_theta"] = {{"overall", summary.min_theta_overall},
                    {"after_burn_in", summary.min_theta_after_burnin},
                    {"burn_in", config.stability_burn_in}};
  j["occupancy"] = summary.occupancy;
  j["polyak_theta"] = summary.polyak_theta;
  j["wall_clock_seconds"] = summary.wall_clock_seconds;
  return j;
}

RunSummary run_single(const ExperimentConfig& config) {
  if (config.replicates != 1) {
    throw ValidationError("run_single: config requests replicates != 1; use run_replicates");
  }
  const WeightVector theta_star = compute_theta_star(config.model);
  fs::create_directories(config.outputs);
  RunSummary summary = run_chain(config, replicate_seed(config.master_seed, 0), theta_star,
                                 fs::path(config.outputs) / "trace.csv");
  std::ofstream out(fs::path(config.outputs) / "summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write summary.json under " + config.outputs);
  out << summary_to_json(summary, config).dump(2) << "\n";
  return summary;
}

EnsembleSummary run_replicates(const ExperimentConfig& config,
                               const std::optional<std::vector<std::uint64_t>>& seeds_override) {
  const int R = seeds_override ? static_cast<int>(seeds_override->size()) : config.replicates;
  if (R < 2) throw ValidationError("run_replicates: need replicates >= 2");
  const WeightVector theta_star = compute_theta_star(config.model);
  fs::create_directories(config.outputs);

  std::vector<RunSummary> results(static_cast<std::size_t>(R));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(R));
  std::atomic<int> next{0};
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const int workers =
      std::min(R, config.workers > 0 ? config.workers : static_cast<int>(hardware));

  const auto work = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= R) return;
      try {
        const std::uint64_t seed = seeds_override
            ? (*seeds_override)[static_cast<std::size_t>(r)]
            : replicate_seed(config.master_seed, static_cast<std::uint64_t>(r));
        std::optional<fs::path> trace_path;
        if (config.write_replicate_traces) {
          char name[32];
          std::snprintf(name, sizeof(name), "trace_r%04d.csv", r);
          trace_path = fs::path(config.outputs) / name;
        }
        results[static_cast<std::size_t>(r)] = run_chain(config, seed, theta_star, trace_path);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  EnsembleSummary ensemble;
  ensemble.replicates = R;
  ensemble.n_steps = config.n_steps;
  ensemble.gamma_n = config.schedule.gamma(std::max<std::uint64_t>(1, config.n_steps));
  ensemble.theta_star = theta_star.values();

  const int d = config.model.num_strata();
  std::vector<std::vector<double>> endpoints;
  std::vector<std::vector<double>> polyaks;
  endpoints.reserve(static_cast<std::size_t>(R));
  polyaks.reserve(static_cast<std::size_t>(R));
  ensemble.mean_final_theta.assign(static_cast<std::size_t>(d), 0.0);
  ensemble.mean_polyak_theta.assign(static_cast<std::size_t>(d), 0.0);
  for (const auto& run : results) {
    endpoints.push_back(run.final_theta);
    polyaks.push_back(run.polyak_theta);
    for (int i = 0; i < d; ++i) {
      ensemble.mean_final_theta[static_cast<std::size_t>(i)] += run.final_theta[static_cast<std::size_t>(i)] / R;
      ensemble.mean_polyak_theta[static_cast<std::size_t>(i)] += run.polyak_theta[static_cast<std::size_t>(i)] / R;
    }
  }
  ensemble.cov_gamma_scaled = replicate_covariance(endpoints, theta_star, 1.0 / ensemble.gamma_n);
  ensemble.cov_sqrt_n_scaled =
      replicate_covariance(endpoints, theta_star, static_cast<double>(config.n_steps));
  ensemble.cov_polyak_sqrt_n =
      replicate_covariance(polyaks, theta_star, static_cast<double>(config.n_steps));

  if (config.oracle_path) {
    std::ifstream in(*config.oracle_path);
    if (!in) throw ValidationError("oracle file: cannot open " + *config.oracle_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const ExactSolution oracle = exact_solution_from_json(text);
    if (!oracle.model_digest.empty() && oracle.model_digest != config.model.digest()) {
      throw ValidationError("oracle file: model digest mismatch (oracle computed for a "
                            "different model)");
    }
    OracleComparison cmp;
    const Eigen::MatrixXd proj = tangent_projector(d);
    try {
      const AsymptoticCovariance limit =
          asymptotic_covariance(config.schedule, d, oracle.U_star);
      cmp.clt_applicable = true;
      cmp.sigma2 = clt_sigma2(config.schedule, d);
      cmp.frob_rel_gamma_scaled = frobenius_relative_error(
          proj * ensemble.cov_gamma_scaled * proj, proj * limit.gamma_scaled * proj);
      if (limit.sqrt_n_scaled) {
        cmp.frob_rel_sqrt_n = frobenius_relative_error(
            proj * ensemble.cov_sqrt_n_scaled * proj, proj * *limit.sqrt_n_scaled * proj);
      }
      const Eigen::MatrixXd polyak_limit = static_cast<double>(d) * d * oracle.U_star;
      cmp.frob_rel_polyak = frobenius_relative_error(proj * ensemble.cov_polyak_sqrt_n * proj,
                                                     proj * polyak_limit * proj);
    } catch (const DomainError&) {
      cmp.clt_applicable = false;  // alpha = 1 with gamma_star <= d/2
    }
    ensemble.oracle_comparison = cmp;
  }

  std::ofstream out(fs::path(config.outputs) / "ensemble.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ensemble.json under " + config.outputs);
  out << ensemble_to_json(ensemble, config).dump(2) << "\n";
  return ensemble;
}

json ensemble_to_json(const EnsembleSummary& ensemble, const ExperimentConfig& config) {
  json j;
  j["schema"] = "wl/1";
  j["code_version"] = kVersion;
  j["config_digest"] = config.config_digest;
  j["model"] = {{"description", config.model.description()},
                {"digest", config.model.digest()},
                {"d", config.model.num_strata()}};
  j["master_seed"] = config.master_seed;
  j["seed_rule"] = "splitmix64(master_seed + (r+1) * 0x9E3779B97F4A7C15)";
  j["replicates"] = ensemble.replicates;
  j["n_steps"] = ensemble.n_steps;
  j["gamma_n"] = ensemble.gamma_n;
  j["theta_star"] = ensemble.theta_star;
  j["mean_final_theta"] = ensemble.mean_final_theta;
  j["mean_polyak_theta"] = ensemble.mean_polyak_theta;
  j["covariance"] = {{"gamma_scaled", matrix_to_json(ensemble.cov_gamma_scaled)},
                     {"sqrt_n_scaled", matrix_to_json(ensemble.cov_sqrt_n_scaled)},
                     {"polyak_sqrt_n", matrix_to_json(ensemble.cov_polyak_sqrt_n)}};
  if (ensemble.oracle_comparison) {
    const auto& cmp = *ensemble.oracle_comparison;
    json c;
    c["clt_applicable"] = cmp.clt_applicable;
    if (cmp.clt_applicable) {
      c["sigma2"] = cmp.sigma2;
      c["frob_rel_gamma_scaled"] = cmp.frob_rel_gamma_scaled;
      if (cmp.frob_rel_sqrt_n) c["frob_rel_sqrt_n"] = *cmp.frob_rel_sqrt_n;
      c["frob_rel_polyak"] = cmp.frob_rel_polyak;
    }
    j["oracle_comparison"] = c;
  }
  return j;
}

json compute_oracle(const ExperimentConfig& config) {
  const WeightVector theta_star = compute_theta_star(config.model);
  json j;
  if (config.model.kind() == SpaceKind::DiscreteFinite) {
    const ExactSolution solution = compute_u_star(config.model, config.proposal, theta_star);
    j = json::parse(exact_solution_to_json(solution));
  } else {
    j["schema"] = "wl/1";
    j["theta_star"] = theta_star.values();
    j["model_digest"] = config.model.digest();
    j["note"] = "U_star and rho are only exactly computable for discrete models";
  }
  fs::create_directories(config.outputs);
  std::ofstream out(fs::path(config.outputs) / "oracle.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write oracle.json under " + config.outputs);
  out << j.dump(2) << "\n";
  return j;
}

}  // namespace harness
}  // namespace wl

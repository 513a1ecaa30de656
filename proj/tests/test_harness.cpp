#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "oracle_helpers.hpp"
#include "wl/harness.hpp"

using namespace wl;
using namespace wl::harness;
using nlohmann::json;
using oracle::approx_abs;
using oracle::approx_rel;

namespace fs = std::filesystem;

namespace {

struct TempDir {
  TempDir() : path(fs::temp_directory_path() /
                   ("wl_harness_" + std::to_string(::getpid()) + "_" + std::to_string(counter++))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
  static int counter;
};
int TempDir::counter = 0;

json minimal_config(const std::string& outputs) {
  return json{{"model", {{"name", "discrete-skew"}}},
              {"schedule", {{"gamma_star", 0.5}, {"alpha", 0.6}}},
              {"n_steps", 1000},
              {"master_seed", 42},
              {"outputs", outputs}};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("config: minimal document gets the documented defaults") {
  const ExperimentConfig c = config_from_json(minimal_config("out"));
  CHECK(c.model.num_strata() == 2);
  CHECK(c.proposal.kind == ProposalSpec::Kind::DiscreteGlobalMix);
  CHECK(c.proposal.global_prob == 0.05);
  CHECK(c.proposal.local_radius == 1);
  CHECK(c.update_rule == UpdateRule::Linearized);
  CHECK(c.replicates == 1);
  CHECK(c.thinning == 1);  // max(1, 1000 / 1e5)
  CHECK_FALSE(c.theta0.has_value());
  CHECK_FALSE(c.x0.has_value());
  CHECK(c.config_digest.size() == 16);

  json big = minimal_config("out");
  big["n_steps"] = 10000000;
  CHECK(config_from_json(big).thinning == 100);  // auto stride
}

TEST_CASE("config: rejections carry field paths") {
  json bad = minimal_config("out");
  bad["schedule"]["alpha"] = 0.4;
  CHECK_THROWS_WITH_AS(config_from_json(bad),
                       doctest::Contains("schedule"), ValidationError);

  bad = minimal_config("out");
  bad["replicates"] = 0;
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);

  bad = minimal_config("out");
  bad["unknown_key"] = 1;
  CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("unknown_key"),
                       ValidationError);

  bad = minimal_config("out");
  bad["model"]["frobnicate"] = true;
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);

  bad = minimal_config("out");
  bad["model"] = {{"name", "no-such-model"}};
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);

  bad = minimal_config("out");
  bad["theta0"] = {0.2, 0.3, 0.5};  // d mismatch
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);

  bad = minimal_config("out");
  bad["x0"] = 7;  // outside K = 4
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);

  bad = minimal_config("out");
  bad["schedule"]["gamma_star"] = 3.0;  // needs a cap
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);
  bad["schedule"]["gamma_cap"] = 0.5;
  CHECK_NOTHROW(config_from_json(bad));
}

TEST_CASE("config: inline models and torus settings") {
  json doc = minimal_config("out");
  doc["model"] = {{"kind", "discrete"},
                  {"log_weights", {0.0, 0.0, 1.0}},
                  {"strata", {0, 1, 1}}};
  CHECK(config_from_json(doc).model.num_states() == 3);

  doc["model"] = {{"kind", "torus"}, {"beta", 4.0}, {"harmonics", 2}, {"d", 6}};
  const ExperimentConfig torus = config_from_json(doc);
  CHECK(torus.model.kind() == SpaceKind::Torus1D);
  CHECK(torus.proposal.kind == ProposalSpec::Kind::TorusGlobalMix);
  CHECK(torus.model.num_strata() == 6);

  doc["x0"] = 1.25;  // wrapped on construction
  CHECK(config_from_json(doc).x0->v == doctest::Approx(0.25));
}

TEST_CASE("run_single: n_steps = 0 leaves theta_0 and writes a header-only trace") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "run").string());
  doc["n_steps"] = 0;
  const RunSummary summary = run_single(config_from_json(doc));
  CHECK(summary.final_theta == WeightVector::uniform(2).values());
  const std::string trace = read_file(tmp.path / "run" / "trace.csv");
  CHECK(count_lines(trace) == 1);
  CHECK(trace == "n,x,stratum,theta_0,theta_1,min_theta,V,gamma\n");
}

TEST_CASE("run_single: trace row count is 1 + ceil(n_steps / thinning) lines") {
  for (const auto& [steps, thinning, rows] :
       {std::tuple<int, int, int>{10, 3, 4}, {10, 1, 10}, {10, 10, 1}, {7, 2, 4}, {100, 7, 15}}) {
    TempDir tmp;
    json doc = minimal_config((tmp.path / "run").string());
    doc["n_steps"] = steps;
    doc["thinning"] = thinning;
    run_single(config_from_json(doc));
    const std::string trace = read_file(tmp.path / "run" / "trace.csv");
    CHECK(count_lines(trace) == static_cast<std::size_t>(rows) + 1);  // + header
    // The final step is always recorded.
    CHECK(trace.find("\n" + std::to_string(steps) + ",") != std::string::npos);
  }
}

TEST_CASE("run_single: summary invariants and provenance") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "run").string());
  doc["n_steps"] = 20000;
  const ExperimentConfig config = config_from_json(doc);
  const RunSummary summary = run_single(config);

  double occ = 0.0;
  for (double f : summary.occupancy) occ += f;
  CHECK(approx_abs(occ, 1.0, 1e-12));
  CHECK(summary.min_theta_overall <= summary.min_theta_after_burnin);
  CHECK(summary.l1_error < 0.2);

  const json s = json::parse(read_file(tmp.path / "run" / "summary.json"));
  CHECK(s.at("schema") == "wl/1");
  CHECK(s.at("config_digest") == config.config_digest);
  CHECK(s.contains("code_version"));
  CHECK(s.at("model").contains("digest"));
  CHECK(s.at("theta_star")[0].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("run_single: identical (config, seed) reruns are byte-identical") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "a").string());
  doc["n_steps"] = 5000;
  run_single(config_from_json(doc));
  doc["outputs"] = (tmp.path / "b").string();
  run_single(config_from_json(doc));

  CHECK(read_file(tmp.path / "a" / "trace.csv") == read_file(tmp.path / "b" / "trace.csv"));
  // Summaries agree except for the wall-clock field.
  json sa = json::parse(read_file(tmp.path / "a" / "summary.json"));
  json sb = json::parse(read_file(tmp.path / "b" / "summary.json"));
  sa.erase("wall_clock_seconds");
  sb.erase("wall_clock_seconds");
  sa.erase("config_digest");  // outputs path participates in the digest
  sb.erase("config_digest");
  CHECK(sa == sb);

  // A different seed changes the trace.
  doc["outputs"] = (tmp.path / "c").string();
  doc["master_seed"] = 43;
  run_single(config_from_json(doc));
  CHECK(read_file(tmp.path / "a" / "trace.csv") != read_file(tmp.path / "c" / "trace.csv"));
}

TEST_CASE("run_single rejects multi-replicate configs; run_replicates needs R >= 2") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "run").string());
  doc["replicates"] = 3;
  CHECK_THROWS_AS(run_single(config_from_json(doc)), ValidationError);
  doc["replicates"] = 1;
  CHECK_THROWS_AS(run_replicates(config_from_json(doc)), ValidationError);
}

TEST_CASE("run_replicates: forced identical seeds give an exactly zero covariance") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "ens").string());
  doc["n_steps"] = 2000;
  const std::vector<std::uint64_t> seeds{9001, 9001};
  const EnsembleSummary ensemble = run_replicates(config_from_json(doc), seeds);
  CHECK(ensemble.replicates == 2);
  // Identical seeds, identical endpoints: the spread about theta_star is a
  // rank-one constant, so the *centered* spread across replicates vanishes;
  // with the moment-about-theta_star convention the matrix equals z z^T for
  // the common deviation z, hence off-replicate variance is zero.
  const Eigen::MatrixXd diff =
      ensemble.cov_gamma_scaled -
      replicate_covariance({ensemble.mean_final_theta, ensemble.mean_final_theta},
                           WeightVector(ensemble.theta_star), 1.0 / ensemble.gamma_n);
  CHECK(diff.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("run_replicates: worker count does not change the ensemble file") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "w1").string());
  doc["n_steps"] = 3000;
  doc["replicates"] = 8;
  doc["workers"] = 1;
  run_replicates(config_from_json(doc));
  doc["outputs"] = (tmp.path / "w4").string();
  doc["workers"] = 4;
  run_replicates(config_from_json(doc));

  json a = json::parse(read_file(tmp.path / "w1" / "ensemble.json"));
  json b = json::parse(read_file(tmp.path / "w4" / "ensemble.json"));
  a.erase("config_digest");
  b.erase("config_digest");
  CHECK(a == b);
}

TEST_CASE("run_replicates: per-replicate traces only when requested") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "ens").string());
  doc["n_steps"] = 500;
  doc["replicates"] = 3;
  run_replicates(config_from_json(doc));
  CHECK_FALSE(fs::exists(tmp.path / "ens" / "trace_r0000.csv"));

  doc["write_replicate_traces"] = true;
  doc["outputs"] = (tmp.path / "ens2").string();
  run_replicates(config_from_json(doc));
  CHECK(fs::exists(tmp.path / "ens2" / "trace_r0000.csv"));
  CHECK(fs::exists(tmp.path / "ens2" / "trace_r0002.csv"));
}

TEST_CASE("run_replicates: oracle comparison and digest guard") {
  TempDir tmp;
  json doc = minimal_config((tmp.path / "oracle").string());
  compute_oracle(config_from_json(doc));

  json ens = minimal_config((tmp.path / "ens").string());
  ens["n_steps"] = 2000;
  ens["replicates"] = 50;
  ens["oracle"] = (tmp.path / "oracle" / "oracle.json").string();
  const EnsembleSummary ensemble = run_replicates(config_from_json(ens));
  REQUIRE(ensemble.oracle_comparison.has_value());
  CHECK(ensemble.oracle_comparison->clt_applicable);
  CHECK(ensemble.oracle_comparison->sigma2 == 1.0);  // d/2 with d = 2

  // Oracle for a different model is refused.
  json other = minimal_config((tmp.path / "oracle2").string());
  other["model"] = {{"name", "discrete-skew"}, {"K", 12}, {"d", 3}};
  compute_oracle(config_from_json(other));
  ens["oracle"] = (tmp.path / "oracle2" / "oracle.json").string();
  CHECK_THROWS_AS(run_replicates(config_from_json(ens)), ValidationError);
}

TEST_CASE("compute_oracle: discrete exact values and torus theta_star-only file") {
  TempDir tmp;

  json flat = minimal_config((tmp.path / "flat").string());
  flat["model"] = {{"name", "discrete-flat"}};
  const json o1 = compute_oracle(config_from_json(flat));
  CHECK(o1.at("theta_star")[0].get<double>() == doctest::Approx(0.5));
  CHECK(o1.at("theta_star")[1].get<double>() == doctest::Approx(0.5));

  json skew = minimal_config((tmp.path / "skew").string());
  const json o2 = compute_oracle(config_from_json(skew));
  CHECK(o2.at("theta_star")[0].get<double>() == doctest::Approx(0.25));
  CHECK(o2.at("theta_star")[1].get<double>() == doctest::Approx(0.75));

  // Flat target with a pure-global proposal: rho = 1/d.
  json global = minimal_config((tmp.path / "global").string());
  global["model"] = {{"name", "discrete-flat"}};
  global["proposal"] = {{"local_radius", 1}, {"global_prob", 1.0}};
  CHECK(compute_oracle(config_from_json(global)).at("rho").get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));

  json torus = minimal_config((tmp.path / "torus").string());
  torus["model"] = {{"name", "torus-doublewell"}, {"beta", 1.0}, {"d", 4}};
  torus["proposal"] = {{"local_halfwidth", 0.1}, {"global_prob", 0.05}};
  const json o3 = compute_oracle(config_from_json(torus));
  CHECK_FALSE(o3.contains("U_star"));
  CHECK(o3.contains("note"));
  CHECK(fs::exists(tmp.path / "torus" / "oracle.json"));
}

TEST_CASE("load_config reads files and reports parse errors as validation errors") {
  TempDir tmp;
  const fs::path good = tmp.path / "good.json";
  std::ofstream(good) << minimal_config((tmp.path / "out").string()).dump();
  CHECK(load_config(good.string()).n_steps == 1000);

  const fs::path bad = tmp.path / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(load_config(bad.string()), ValidationError);
  CHECK_THROWS_AS(load_config((tmp.path / "missing.json").string()), ValidationError);
}

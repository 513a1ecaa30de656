#include "wl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace wl {
namespace {

void check_pair(const WeightVector& theta, const WeightVector& theta_star) {
  if (theta.dim() != theta_star.dim()) {
    throw DomainError("theta and theta_star have different dimensions");
  }
}

}  // namespace

std::vector<double> mean_field(const WeightVector& theta, const WeightVector& theta_star) {
  check_pair(theta, theta_star);
  const int d = theta.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += theta_star[i] / theta[i];
  std::vector<double> h(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) h[static_cast<std::size_t>(i)] = (theta_star[i] - theta[i]) / s;
  return h;
}

double lyapunov(const WeightVector& theta, const WeightVector& theta_star) {
  check_pair(theta, theta_star);
  double v = 0.0;
  for (int i = 0; i < theta.dim(); ++i) v += theta_star[i] * std::log(theta_star[i] / theta[i]);
  return v;
}

double lyapunov_descent(const WeightVector& theta, const WeightVector& theta_star) {
  check_pair(theta, theta_star);
  double s = 0.0;
  double quad = 0.0;
  for (int i = 0; i < theta.dim(); ++i) {
    s += theta_star[i] / theta[i];
    const double diff = theta_star[i] - theta[i];
    quad += diff * diff / theta[i];
  }
  return -quad / s;
}

Eigen::VectorXd solve_poisson(const Eigen::MatrixXd& P, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& pi) {
  const Eigen::Index K = P.rows();
  if (P.cols() != K || g.size() != K || pi.size() != K) {
    throw DomainError("solve_poisson: inconsistent dimensions");
  }
  const double mean = pi.dot(g);
  const Eigen::VectorXd rhs = g.array() - mean;
  const Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(K, K) - P + Eigen::VectorXd::Ones(K) * pi.transpose();
  Eigen::VectorXd g_hat = A.partialPivLu().solve(rhs);
  g_hat.array() -= pi.dot(g_hat);  // exact centering
  const double residual = (g_hat - P * g_hat - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-9)) {
    throw NumericError("solve_poisson: residual " + std::to_string(residual) +
                       " exceeds 1e-9; transition matrix is not uniformly ergodic");
  }
  return g_hat;
}

Eigen::VectorXd biased_mass_vector(const TargetModel& model, const WeightVector& theta,
                                   const WeightVector& theta_star) {
  const int K = model.num_states();
  Eigen::VectorXd pi(K);
  for (int x = 0; x < K; ++x) pi(x) = model.biased_density(theta, theta_star, discrete_state(x));
  return pi;
}

UStarAssembly assemble_u_star(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                              const Eigen::MatrixXd& H) {
  const Eigen::Index K = P.rows();
  const Eigen::Index d = H.cols();
  if (H.rows() != K) throw DomainError("assemble_u_star: H must have one row per state");
  UStarAssembly out;
  out.H_hat.resize(K, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.H_hat.col(j) = solve_poisson(P, H.col(j), pi);
  }
  const Eigen::MatrixXd PH = P * out.H_hat;
  out.U_star = out.H_hat.transpose() * pi.asDiagonal() * out.H_hat -
               PH.transpose() * pi.asDiagonal() * PH;
  return out;
}

ExactSolution compute_u_star(const TargetModel& model, const ProposalSpec& proposal,
                             const WeightVector& theta_star) {
  if (model.kind() != SpaceKind::DiscreteFinite) {
    throw UnsupportedError("compute_u_star: U_star is exactly computable only for "
                           "discrete models; use a discrete surrogate");
  }
  const int K = model.num_states();
  const int d = model.num_strata();
  if (K > 10000) throw ValidationError("compute_u_star: oracle path limited to K <= 10^4");

  ExactSolution solution{theta_star, {}, {}, {}, 0.0, model.digest()};
  solution.P_star = transition_matrix(model, proposal, theta_star);
  const Eigen::VectorXd pi = biased_mass_vector(model, theta_star, theta_star);

  Eigen::MatrixXd H(K, d);
  for (int x = 0; x < K; ++x) {
    const int ix = model.stratum_unchecked(discrete_state(x));
    for (int j = 0; j < d; ++j) {
      H(x, j) = theta_star[j] * ((j == ix ? 1.0 : 0.0) - theta_star[ix]);
    }
  }
  UStarAssembly assembly = assemble_u_star(solution.P_star, pi, H);
  solution.H_hat = std::move(assembly.H_hat);
  solution.U_star = std::move(assembly.U_star);
  solution.rho = minorization_constant(model, proposal, theta_star);
  return solution;
}

double minorization_constant(const TargetModel& model, const ProposalSpec& proposal,
                             const WeightVector& theta_star) {
  if (model.kind() != SpaceKind::DiscreteFinite) {
    throw UnsupportedError("minorization_constant: exact inf q / sup pi need a discrete model");
  }
  const int K = model.num_states();
  double inf_q = std::numeric_limits<double>::infinity();
  for (int x = 0; x < K; ++x) {
    for (int y = 0; y < K; ++y) inf_q = std::min(inf_q, proposal_mass(proposal, K, x, y));
  }
  const auto& masses = model.discrete_masses();
  const double sup_pi = *std::max_element(masses.begin(), masses.end());
  // Mass/density convention factors K cancel in the ratio.
  const double rho = inf_q / sup_pi * theta_star.min_component();
  if (!(rho > 0.0)) {
    throw ValidationError("minorization_constant: rho <= 0, the model violates A1/A2 "
                          "(is the global proposal probability zero?)");
  }
  return rho;
}

double clt_sigma2(const ScheduleSpec& schedule, int d) {
  if (d < 2) throw DomainError("clt_sigma2: need d >= 2");
  if (schedule.clt_case_one()) return d / 2.0;
  const double gs = schedule.gamma_star();
  if (!(gs > d / 2.0)) {
    throw DomainError("clt_sigma2: alpha = 1 requires gamma_star > d/2 for the CLT "
                      "(gamma_star = " + std::to_string(gs) + ", d = " + std::to_string(d) + ")");
  }
  return gs * d / (2.0 * gs - d);
}

AsymptoticCovariance asymptotic_covariance(const ScheduleSpec& schedule, int d,
                                           const Eigen::MatrixXd& u_star) {
  if (u_star.rows() != d || u_star.cols() != d) {
    throw DomainError("asymptotic_covariance: U_star must be d x d");
  }
  const double sigma2 = clt_sigma2(schedule, d);
  AsymptoticCovariance out;
  out.gamma_scaled = sigma2 * u_star;
  if (!schedule.clt_case_one()) {
    out.sqrt_n_scaled = schedule.gamma_star() * sigma2 * u_star;
  }
  return out;
}

double ergodic_average(const std::vector<State>& states,
                       const std::function<double(State)>& f) {
  if (states.empty()) throw DomainError("ergodic_average: empty trace");
  double sum = 0.0;
  for (State x : states) sum += f(x);
  return sum / static_cast<double>(states.size());
}

double stratified_estimator(const TargetModel& model, const std::vector<State>& states,
                            const WeightVector& theta_n, const std::function<double(State)>& f) {
  if (states.empty()) throw DomainError("stratified_estimator: empty trace");
  if (theta_n.dim() != model.num_strata()) {
    throw DomainError("stratified_estimator: theta dimension mismatch");
  }
  std::vector<double> per_stratum(static_cast<std::size_t>(model.num_strata()), 0.0);
  for (State x : states) {
    per_stratum[static_cast<std::size_t>(model.stratum_index(x))] += f(x);
  }
  double total = 0.0;
  for (int i = 0; i < model.num_strata(); ++i) {
    total += theta_n[i] * per_stratum[static_cast<std::size_t>(i)];
  }
  return model.num_strata() * total / static_cast<double>(states.size());
}

WeightVector polyak_average(const std::vector<std::vector<double>>& theta_history) {
  if (theta_history.empty()) throw DomainError("polyak_average: empty history");
  std::vector<double> mean(theta_history.front().size(), 0.0);
  for (const auto& theta : theta_history) {
    if (theta.size() != mean.size()) throw DomainError("polyak_average: ragged history");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += theta[i];
  }
  for (double& v : mean) v /= static_cast<double>(theta_history.size());
  return WeightVector(std::move(mean));
}

Eigen::MatrixXd replicate_covariance(const std::vector<std::vector<double>>& endpoints,
                                     const WeightVector& theta_star, double normalization) {
  if (endpoints.size() < 2) throw DomainError("replicate_covariance: need R >= 2 replicates");
  if (!(normalization > 0.0)) throw DomainError("replicate_covariance: normalization must be > 0");
  const int d = theta_star.dim();
  const double scale = std::sqrt(normalization);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd z(d);
  for (const auto& endpoint : endpoints) {
    if (static_cast<int>(endpoint.size()) != d) {
      throw DomainError("replicate_covariance: endpoint dimension mismatch");
    }
    for (int i = 0; i < d; ++i) z(i) = scale * (endpoint[static_cast<std::size_t>(i)] - theta_star[i]);
    cov += z * z.transpose();
  }
  return cov / static_cast<double>(endpoints.size());
}

Eigen::MatrixXd tangent_projector(int d) {
  return Eigen::MatrixXd::Identity(d, d) - Eigen::MatrixXd::Constant(d, d, 1.0 / d);
}

double frobenius_relative_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& reference) {
  return (estimate - reference).norm() / reference.norm();
}

std::string exact_solution_to_json(const ExactSolution& solution) {
  nlohmann::json j;
  j["schema"] = "wl/1";
  j["theta_star"] = solution.theta_star.values();
  const int d = solution.theta_star.dim();
  std::vector<std::vector<double>> u(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) {
    u[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) u[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = solution.U_star(r, c);
  }
  j["U_star"] = u;
  j["rho"] = solution.rho;
  j["model_digest"] = solution.model_digest;
  return j.dump(2) + "\n";
}

ExactSolution exact_solution_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "wl/1") {
    throw ValidationError("oracle file: unsupported schema, expected \"wl/1\"");
  }
  ExactSolution solution{WeightVector(j.at("theta_star").get<std::vector<double>>()),
                         {}, {}, {}, j.at("rho").get<double>(),
                         j.value("model_digest", "")};
  const auto u = j.at("U_star").get<std::vector<std::vector<double>>>();
  const int d = solution.theta_star.dim();
  if (static_cast<int>(u.size()) != d) throw ValidationError("oracle file: U_star shape mismatch");
  solution.U_star.resize(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(u[static_cast<std::size_t>(r)].size()) != d) {
      throw ValidationError("oracle file: U_star shape mismatch");
    }
    for (int c = 0; c < d; ++c) solution.U_star(r, c) = u[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return solution;
}

}  // namespace wl

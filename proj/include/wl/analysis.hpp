#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wl/kernel.hpp"
#include "wl/model.hpp"
#include "wl/schedule.hpp"
#include "wl/weight_vector.hpp"

namespace wl {

// Exact oracle bundle at theta_star for a discrete model: the transition
// matrix, the Poisson solutions H_hat (one column per stratum, centered so
// their pi_{theta_star}-mean is zero), the asymptotic covariance kernel
// U_star, and the minorization constant rho.
struct ExactSolution {
  WeightVector theta_star;
  Eigen::MatrixXd P_star;  // K x K
  Eigen::MatrixXd H_hat;   // K x d
  Eigen::MatrixXd U_star;  // d x d, symmetric PSD, tangent to the simplex
  double rho = 0.0;
  std::string model_digest;
};

// Mean field h(theta) = (sum_j theta_star(j)/theta(j))^-1 (theta_star - theta):
// the expected update direction under pi_theta. Components sum to zero and
// h(theta_star) = 0.
std::vector<double> mean_field(const WeightVector& theta, const WeightVector& theta_star);

// Lyapunov function V(theta) = sum_i theta_star(i) ln(theta_star(i)/theta(i)),
// a KL divergence: nonnegative, zero only at theta_star.
double lyapunov(const WeightVector& theta, const WeightVector& theta_star);

// <grad V(theta), h(theta)> =
// -(sum theta_star(i)/theta(i))^-1 sum_i (theta_star(i)-theta(i))^2/theta(i),
// nonpositive and zero iff theta = theta_star.
double lyapunov_descent(const WeightVector& theta, const WeightVector& theta_star);

// Unique solution of g_hat - P g_hat = g - pi(g) with pi(g_hat) = 0, via the
// augmented system (I - P + 1 pi^T) g_hat = g - pi(g) and a dense partial-
// pivoting solve. Throws NumericError when the defining-equation residual
// exceeds 1e-9 (which signals an ergodicity violation).
Eigen::VectorXd solve_poisson(const Eigen::MatrixXd& P, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& pi);

// pi_theta as a probability vector over the K states of a discrete model.
Eigen::VectorXd biased_mass_vector(const TargetModel& model, const WeightVector& theta,
                                   const WeightVector& theta_star);

// Assembles U_star = sum_x pi(x) [Hhat(x) Hhat(x)^T - (P Hhat)(x) (P Hhat)(x)^T]
// from a transition matrix, its stationary vector and the field values
// H(x, .) (rows of H). Exposed separately so synthetic fields can be fed in.
struct UStarAssembly {
  Eigen::MatrixXd H_hat;
  Eigen::MatrixXd U_star;
};
UStarAssembly assemble_u_star(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                              const Eigen::MatrixXd& H);

// Full exact solution for a discrete model (spec operation compute_U_star).
ExactSolution compute_u_star(const TargetModel& model, const ProposalSpec& proposal,
                             const WeightVector& theta_star);

// Doeblin constant rho = (inf q) (sup pi)^-1 min_i theta_star(i) with q and
// pi as densities w.r.t. the reference measure; P_theta(x, .) >= rho
// pi_theta(.) holds entrywise for every theta. Discrete models only.
double minorization_constant(const TargetModel& model, const ProposalSpec& proposal,
                             const WeightVector& theta_star);

// sigma^2 of the CLT: d/2 for alpha < 1; gamma_star d / (2 gamma_star - d)
// for alpha = 1 with gamma_star > d/2 (otherwise the CLT does not apply).
double clt_sigma2(const ScheduleSpec& schedule, int d);

// gamma_n-scaled limit covariance sigma^2 U_star; for alpha = 1 additionally
// the sqrt(n)-normalized matrix gamma_star sigma^2 U_star (= d^2 U_star at the
// optimal gain gamma_star = d).
struct AsymptoticCovariance {
  Eigen::MatrixXd gamma_scaled;
  std::optional<Eigen::MatrixXd> sqrt_n_scaled;
};
AsymptoticCovariance asymptotic_covariance(const ScheduleSpec& schedule, int d,
                                           const Eigen::MatrixXd& u_star);

// (1/N) sum f(x_k) over recorded states. Thinned records are unbiased for
// stationary means.
double ergodic_average(const std::vector<State>& states,
                       const std::function<double(State)>& f);

// Stratified importance-sampling estimator
// I_n(f) = d sum_i theta_n(i) (1/N) sum_k f(x_k) 1_{stratum=i}(x_k),
// consistent for the integral of f under the unbiased target pi.
double stratified_estimator(const TargetModel& model, const std::vector<State>& states,
                            const WeightVector& theta_n, const std::function<double(State)>& f);

// Componentwise mean of a theta history (Polyak-Ruppert average). The mean of
// simplex points is a simplex point; construction renormalizes as a guard.
WeightVector polyak_average(const std::vector<std::vector<double>>& theta_history);

// Empirical second moment about zero of sqrt(normalization) (theta_r -
// theta_star) across replicates; the CLT says these are centered, so no
// sample-mean subtraction. Needs R >= 2.
Eigen::MatrixXd replicate_covariance(const std::vector<std::vector<double>>& endpoints,
                                     const WeightVector& theta_star, double normalization);

// Projector onto the simplex-tangent subspace (component sums zero); the CLT
// comparisons are made there since the 1-direction carries no fluctuation.
Eigen::MatrixXd tangent_projector(int d);
double frobenius_relative_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& reference);

// Oracle file round-trip (schema "wl/1"): theta_star, U_star, rho,
// model_digest. H_hat and P_star stay in memory only.
std::string exact_solution_to_json(const ExactSolution& solution);
ExactSolution exact_solution_from_json(const std::string& text);

}  // namespace wl

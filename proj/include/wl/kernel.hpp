#pragma once

#include <Eigen/Dense>

#include "wl/model.hpp"
#include "wl/rng.hpp"
#include "wl/weight_vector.hpp"

namespace wl {

// Symmetric proposal: a local move mixed with a global (uniform) move with
// probability global_prob. The global component keeps inf q > 0, which a
// purely local proposal on the torus would violate for halfwidth < 1/2.
//
// DiscreteGlobalMix: uniform over {x-r, ..., x+r} \ {x} (wrapped mod K) with
// probability 1 - eps, uniform over all K states with probability eps.
// TorusGlobalMix: x + Uniform(-delta, delta) (wrapped) with probability
// 1 - eps, Uniform[0,1) with probability eps.
struct ProposalSpec {
  enum class Kind { DiscreteGlobalMix, TorusGlobalMix };

  Kind kind = Kind::DiscreteGlobalMix;
  int local_radius = 1;         // discrete, >= 1
  double local_halfwidth = 0.1; // torus, in (0, 0.5]
  double global_prob = 0.05;    // in (0, 1] for A2; tests may set 0 directly

  static ProposalSpec discrete_mix(int local_radius, double global_prob);
  static ProposalSpec torus_mix(double local_halfwidth, double global_prob);
};

// One draw from q(x, .). Consumes exactly two uniforms from the stream
// regardless of the branch taken, so trajectories are reproducible.
State propose(RngStream& rng, const ProposalSpec& spec, const TargetModel& model, State x);

// Exact proposal probability. Discrete: probability mass q(x -> y), wrapping
// multiplicities included. Torus: Lebesgue density of q(x, .) at y.
double proposal_mass(const ProposalSpec& spec, int K, int x, int y);
double proposal_density(const ProposalSpec& spec, double x, double y);

// alpha_theta(x, y) = 1 ^ [pi(y) theta(I(x))] / [pi(x) theta(I(y))], computed
// in log space; the normalizing constants of pi and pi_theta cancel.
double acceptance_prob(const TargetModel& model, const WeightVector& theta, State x, State y);

// One draw from P_theta(x, .). Consumes exactly three uniforms (two for the
// proposal, one for the accept decision, drawn even when alpha = 1).
State mh_step(RngStream& rng, const TargetModel& model, const ProposalSpec& spec,
              const WeightVector& theta, State x);

namespace detail {
double acceptance_prob_impl(const TargetModel& model, const std::vector<double>& theta,
                            State x, State y);
State mh_step_impl(RngStream& rng, const TargetModel& model, const ProposalSpec& spec,
                   const std::vector<double>& theta, State x);
}  // namespace detail

// Exact row-stochastic K x K matrix of P_theta for discrete models: entry
// (x, y) = q(x,y) alpha_theta(x,y) for y != x, diagonal the complement.
// Leaves pi_theta invariant and is reversible w.r.t. it.
Eigen::MatrixXd transition_matrix(const TargetModel& model, const ProposalSpec& spec,
                                  const WeightVector& theta);

}  // namespace wl

#include "wl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wl {

ProposalSpec ProposalSpec::discrete_mix(int local_radius, double global_prob) {
  if (local_radius < 1) {
    throw ValidationError("ProposalSpec: local_radius must be >= 1, got " +
                          std::to_string(local_radius));
  }
  if (!(global_prob > 0.0) || global_prob > 1.0) {
    throw ValidationError("ProposalSpec: global_prob must lie in (0, 1]");
  }
  ProposalSpec spec;
  spec.kind = Kind::DiscreteGlobalMix;
  spec.local_radius = local_radius;
  spec.global_prob = global_prob;
  return spec;
}

ProposalSpec ProposalSpec::torus_mix(double local_halfwidth, double global_prob) {
  if (!(local_halfwidth > 0.0) || local_halfwidth > 0.5) {
    throw ValidationError("ProposalSpec: local_halfwidth must lie in (0, 0.5]");
  }
  if (!(global_prob > 0.0) || global_prob > 1.0) {
    throw ValidationError("ProposalSpec: global_prob must lie in (0, 1]");
  }
  ProposalSpec spec;
  spec.kind = Kind::TorusGlobalMix;
  spec.local_halfwidth = local_halfwidth;
  spec.global_prob = global_prob;
  return spec;
}

namespace {

void check_compatible(const ProposalSpec& spec, const TargetModel& model) {
  const bool discrete = spec.kind == ProposalSpec::Kind::DiscreteGlobalMix;
  if (discrete != (model.kind() == SpaceKind::DiscreteFinite)) {
    throw DomainError("proposal kind does not match the model's state space");
  }
}

}  // namespace

State propose(RngStream& rng, const ProposalSpec& spec, const TargetModel& model, State x) {
  check_compatible(spec, model);
  model.check_state(x);
  const double u_branch = rng.uniform();
  const double u_draw = rng.uniform();
  if (spec.kind == ProposalSpec::Kind::DiscreteGlobalMix) {
    const int K = model.num_states();
    int y;
    if (u_branch < spec.global_prob) {
      y = std::min(static_cast<int>(u_draw * K), K - 1);
    } else {
      const int r = spec.local_radius;
      const int j = std::min(static_cast<int>(u_draw * (2 * r)), 2 * r - 1);
      const int offset = j < r ? j - r : j - r + 1;  // {-r..-1, 1..r}
      y = static_cast<int>((static_cast<long long>(x.v) + offset) % K + K) % K;
    }
    return discrete_state(y);
  }
  if (u_branch < spec.global_prob) return State{u_draw};
  return torus_state(x.v + (2.0 * u_draw - 1.0) * spec.local_halfwidth);
}

double proposal_mass(const ProposalSpec& spec, int K, int x, int y) {
  if (spec.kind != ProposalSpec::Kind::DiscreteGlobalMix) {
    throw DomainError("proposal_mass: discrete proposal required");
  }
  const int r = spec.local_radius;
  int count = 0;  // offsets in {-r..-1, 1..r} that land on y after wrapping
  for (int off = -r; off <= r; ++off) {
    if (off == 0) continue;
    if (((x + off) % K + K) % K == y) ++count;
  }
  return (1.0 - spec.global_prob) * count / (2.0 * r) + spec.global_prob / K;
}

double proposal_density(const ProposalSpec& spec, double x, double y) {
  if (spec.kind != ProposalSpec::Kind::TorusGlobalMix) {
    throw DomainError("proposal_density: torus proposal required");
  }
  double dist = std::abs(wrap_torus(x) - wrap_torus(y));
  dist = std::min(dist, 1.0 - dist);
  const double local = dist <= spec.local_halfwidth ? 1.0 / (2.0 * spec.local_halfwidth) : 0.0;
  return (1.0 - spec.global_prob) * local + spec.global_prob;
}

namespace detail {

double acceptance_prob_impl(const TargetModel& model, const std::vector<double>& theta,
                            State x, State y) {
  const double log_ratio = model.log_weight_unchecked(y) - model.log_weight_unchecked(x) +
                           std::log(theta[static_cast<std::size_t>(model.stratum_unchecked(x))]) -
                           std::log(theta[static_cast<std::size_t>(model.stratum_unchecked(y))]);
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

State mh_step_impl(RngStream& rng, const TargetModel& model, const ProposalSpec& spec,
                   const std::vector<double>& theta, State x) {
  const State y = propose(rng, spec, model, x);
  const double u = rng.uniform();
  return u < acceptance_prob_impl(model, theta, x, y) ? y : x;
}

}  // namespace detail

double acceptance_prob(const TargetModel& model, const WeightVector& theta, State x, State y) {
  model.check_state(x);
  model.check_state(y);
  if (theta.dim() != model.num_strata()) {
    throw DomainError("acceptance_prob: weight dimension does not match stratification");
  }
  return detail::acceptance_prob_impl(model, theta.values(), x, y);
}

State mh_step(RngStream& rng, const TargetModel& model, const ProposalSpec& spec,
              const WeightVector& theta, State x) {
  check_compatible(spec, model);
  model.check_state(x);
  return detail::mh_step_impl(rng, model, spec, theta.values(), x);
}

Eigen::MatrixXd transition_matrix(const TargetModel& model, const ProposalSpec& spec,
                                  const WeightVector& theta) {
  if (model.kind() != SpaceKind::DiscreteFinite) {
    throw UnsupportedError("transition_matrix: exact matrices exist only for discrete models");
  }
  check_compatible(spec, model);
  const int K = model.num_states();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(K, K);
  for (int x = 0; x < K; ++x) {
    double off_diagonal = 0.0;
    for (int y = 0; y < K; ++y) {
      if (y == x) continue;
      const double flux = proposal_mass(spec, K, x, y) *
                          detail::acceptance_prob_impl(model, theta.values(),
                                                       discrete_state(x), discrete_state(y));
      P(x, y) = flux;
      off_diagonal += flux;
    }
    P(x, x) = 1.0 - off_diagonal;
  }
  return P;
}

}  // namespace wl

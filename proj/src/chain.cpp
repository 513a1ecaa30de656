#include "wl/chain.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace wl {

ChainState make_chain_state(const TargetModel& model, std::uint64_t seed,
                            std::optional<WeightVector> theta0, std::optional<State> x0) {
  ChainState state{0, State{0.0}, {}, RngStream(seed)};
  if (theta0) {
    if (theta0->dim() != model.num_strata()) {
      throw ValidationError("theta0 dimension does not match the stratification");
    }
    state.theta = theta0->values();
  } else {
    state.theta = WeightVector::uniform(model.num_strata()).values();
  }
  state.x = x0.value_or(State{0.0});
  model.check_state(state.x);
  return state;
}

ChainState wl_iterate(ChainState state, const TargetModel& model, const ProposalSpec& proposal,
                      const ScheduleSpec& schedule, UpdateRule rule, std::uint64_t n_steps,
                      const std::vector<StepObserver>& observers) {
  // Sigma theta drifts by at most an ulp per update; an occasional renormalize
  // keeps long runs on the simplex.
  constexpr std::uint64_t kRenormEvery = 1'000'000;
  std::uint64_t since_renorm = 0;

  for (std::uint64_t step = 0; step < n_steps; ++step) {
    state.x = detail::mh_step_impl(state.rng, model, proposal, state.theta, state.x);
    const int stratum = model.stratum_unchecked(state.x);
    const double gamma = schedule.gamma(state.n + 1);
    if (rule == UpdateRule::Linearized) {
      detail::apply_linearized(state.theta, stratum, gamma);
    } else {
      detail::apply_standard(state.theta, stratum, gamma);
    }
    ++state.n;
    if (++since_renorm >= kRenormEvery) {
      const double sum = std::accumulate(state.theta.begin(), state.theta.end(), 0.0);
      for (double& v : state.theta) v /= sum;
      since_renorm = 0;
    }
    for (const auto& observer : observers) {
      try {
        observer(state.n, state.x, state.theta);
      } catch (const std::exception& e) {
        throw std::runtime_error("observer failed at step " + std::to_string(state.n) + ": " +
                                 e.what());
      }
    }
  }
  return state;
}

}  // namespace wl

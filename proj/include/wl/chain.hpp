#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wl/kernel.hpp"
#include "wl/model.hpp"
#include "wl/rng.hpp"
#include "wl/schedule.hpp"
#include "wl/updates.hpp"

namespace wl {

// The coupled (X_n, theta_n) process. Owned by exactly one execution context;
// independent chains use independent seeds (see replicate_seed).
struct ChainState {
  std::uint64_t n = 0;
  State x;
  std::vector<double> theta;
  RngStream rng;
};

// theta0 defaults to uniform, x0 to state 0 / torus point 0.
ChainState make_chain_state(const TargetModel& model, std::uint64_t seed,
                            std::optional<WeightVector> theta0 = std::nullopt,
                            std::optional<State> x0 = std::nullopt);

// Called after every step with (n, X_n, theta_n); n counts from 1.
using StepObserver = std::function<void(std::uint64_t, State, const std::vector<double>&)>;

// Runs n_steps iterations of the coupled process: draw X_{n+1} from
// P_{theta_n}(X_n, .), then move theta along the chosen update rule with step
// size gamma_{n+1} for the stratum of X_{n+1}. Deterministic given the seed.
// An observer throwing aborts the run with a diagnostic.
ChainState wl_iterate(ChainState state, const TargetModel& model, const ProposalSpec& proposal,
                      const ScheduleSpec& schedule, UpdateRule rule, std::uint64_t n_steps,
                      const std::vector<StepObserver>& observers = {});

}  // namespace wl

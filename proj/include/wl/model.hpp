#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wl/errors.hpp"
#include "wl/weight_vector.hpp"

namespace wl {

enum class SpaceKind { DiscreteFinite, Torus1D };

// A point of the state space. For DiscreteFinite, v holds an exact integer in
// [0, K); for Torus1D, a canonical representative in [0, 1).
struct State {
  double v = 0.0;
};

inline State discrete_state(int x) { return State{static_cast<double>(x)}; }

// Wrap to the canonical representative in [0, 1).
inline double wrap_torus(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y -= 1.0;  // rounding of x - floor(x) can hit 1.0 exactly
  return y;
}
inline State torus_state(double x) { return State{wrap_torus(x)}; }

// Partition of the state space into d >= 2 strata. Discrete spaces use an
// explicit total, surjective state -> index map; the torus uses bin edges
// 0 = a_0 < a_1 < ... < a_d = 1 with the reaction coordinate fixed to the
// identity (a smooth coordinate can be absorbed by precomposing the target's
// log weight).
class Stratification {
 public:
  static Stratification explicit_map(std::vector<int> state_to_stratum);
  static Stratification bin_edges(std::vector<double> edges);
  static Stratification uniform_bins(int d);

  int num_strata() const { return d_; }
  bool is_explicit() const { return !map_.empty(); }

  int map_size() const { return static_cast<int>(map_.size()); }
  int stratum_of_index(int x) const { return map_[static_cast<std::size_t>(x)]; }

  // Bin index with a_i <= x < a_{i+1}; the last bin is closed at a_d = 1.
  int stratum_of_point(double x) const {
    int i = static_cast<int>(x * d_);  // exact for uniform bins, a guess otherwise
    if (i > d_ - 1) i = d_ - 1;
    while (i > 0 && x < edges_[static_cast<std::size_t>(i)]) --i;
    while (i < d_ - 1 && x >= edges_[static_cast<std::size_t>(i + 1)]) ++i;
    return i;
  }

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<int>& map() const { return map_; }

 private:
  friend class TargetModel;
  Stratification() = default;
  int d_ = 0;
  std::vector<int> map_;
  std::vector<double> edges_;
};

// Quadrature control for torus integrals: composite trapezoid on a uniform
// grid, doubled until successive refinements agree in sup norm or the node
// cap is reached. Trapezoid is spectrally accurate for smooth periodic
// integrands, so the cap is generous.
struct QuadratureSpec {
  int initial_nodes = 4096;   // >= 1000
  double tolerance = 1e-10;   // sup-norm agreement between doublings
  int max_nodes = 1 << 22;
};

// State space + unnormalized log target + stratification. Immutable after
// construction and safe to share read-only across concurrent chains.
//
// Density conventions used throughout: for DiscreteFinite, normalized values
// are probability masses (summing to 1 over the K states); for Torus1D they
// are Lebesgue densities on [0,1). The reference measure is uniform
// (counting/K) in the discrete case and Lebesgue on the torus; ratios of the
// two conventions agree wherever formulas mix them.
class TargetModel {
 public:
  static TargetModel discrete(std::vector<double> log_weights, Stratification strat,
                              std::string description = "discrete");
  static TargetModel torus(std::function<double(double)> log_weight, Stratification strat,
                           std::string description = "torus");

  SpaceKind kind() const { return kind_; }
  int num_states() const;  // DiscreteFinite only
  int num_strata() const { return strat_.num_strata(); }
  const Stratification& stratification() const { return strat_; }

  // Checked state access; throws DomainError for states outside the space.
  void check_state(State x) const;

  int stratum_index(State x) const {
    check_state(x);
    return stratum_unchecked(x);
  }

  int stratum_unchecked(State x) const {
    if (kind_ == SpaceKind::DiscreteFinite) return strat_.stratum_of_index(static_cast<int>(x.v));
    return strat_.stratum_of_point(x.v);
  }

  double log_weight(State x) const {
    check_state(x);
    return log_weight_unchecked(x);
  }

  double log_weight_unchecked(State x) const {
    if (kind_ == SpaceKind::DiscreteFinite) return log_w_[static_cast<std::size_t>(x.v)];
    return log_weight_fn_(x.v);
  }

  double unnormalized_density(State x) const { return std::exp(log_weight(x)); }

  // Normalized target: probability mass (discrete) / Lebesgue density (torus).
  double normalized_density(State x) const;

  // pi_theta(x) = (sum_i theta_star(i)/theta(i))^-1 sum_i pi(x)/theta(i) 1_{X_i}(x),
  // with pi normalized. Oracle-side only; the sampler never needs theta_star.
  double biased_density(const WeightVector& theta, const WeightVector& theta_star, State x) const;

  const std::vector<double>& discrete_log_weights() const { return log_w_; }
  const std::vector<double>& discrete_masses() const { return masses_; }

  const std::string& description() const { return description_; }
  std::string digest() const;

 private:
  TargetModel() = default;

  SpaceKind kind_ = SpaceKind::DiscreteFinite;
  Stratification strat_;
  std::vector<double> log_w_;    // discrete
  std::vector<double> masses_;   // discrete, normalized
  std::function<double(double)> log_weight_fn_;  // torus
  double torus_shift_ = 0.0;     // max log weight on the validation grid
  double torus_norm_ = 1.0;      // integral of exp(log_weight - shift)
  std::string description_;
};

// theta_star(i) = stratum i mass of the normalized target: exact summation
// for DiscreteFinite, adaptive trapezoid quadrature for Torus1D. Any
// component below 1e-12 is rejected as a degenerate stratum.
WeightVector compute_theta_star(const TargetModel& model, const QuadratureSpec& quad = {});

// Spec'd operation aliases (thin wrappers over the model methods).
int stratum_index(const TargetModel& model, State x);
double unnormalized_density(const TargetModel& model, State x);
double biased_density(const TargetModel& model, const WeightVector& theta,
                      const WeightVector& theta_star, State x);

// Built-in named models.
TargetModel make_discrete_flat(int K = 4, int d = 2);
TargetModel make_discrete_skew(int K = 4, int d = 2);
TargetModel make_torus_doublewell(double beta = 1.0, int d = 4);
// General cosine potential U(x) = cos(2 pi harmonics x) at inverse temperature beta.
TargetModel make_torus_cosine(double beta, int harmonics, Stratification strat);

}  // namespace wl

#pragma once

#include <vector>

#include "wl/weight_vector.hpp"

namespace wl {

enum class UpdateRule { Linearized, Standard };

// Stochastic-approximation field, componentwise
// H_j(theta; i) = theta(j) (1_{j=i} - theta(i)) for a visit to stratum i.
// Components sum to zero.
std::vector<double> field_H(const WeightVector& theta, int visited_stratum);

// Linearized update: theta'(i) = theta(i) + g theta(i)(1 - theta(i)),
// theta'(k) = theta(k) - g theta(k) theta(i) for k != i. Equals
// theta + g * field_H and preserves the simplex exactly for g in [0, 1).
WeightVector update_linearized(const WeightVector& theta, int visited_stratum, double gamma);

// Standard Wang-Landau update:
// theta'(k) = theta(k) (1 + g 1_{k=i}) / (1 + g theta(i)); valid for any
// g >= 0, first-order equal to the linearized rule (difference <= g^2).
WeightVector update_standard(const WeightVector& theta, int visited_stratum, double gamma);

namespace detail {
// In-place variants used by the iteration loop; same algebra, no allocation.
void apply_linearized(std::vector<double>& theta, int visited_stratum, double gamma);
void apply_standard(std::vector<double>& theta, int visited_stratum, double gamma);
}  // namespace detail

}  // namespace wl

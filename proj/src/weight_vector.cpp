#include "wl/weight_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wl/errors.hpp"

namespace wl {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.size() < 2) {
    throw ValidationError("WeightVector: need d >= 2 components, got " + std::to_string(w_.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i]) || w_[i] <= 0.0) {
      throw ValidationError("WeightVector: component " + std::to_string(i) +
                            " must be finite and > 0, got " + std::to_string(w_[i]));
    }
    sum += w_[i];
  }
  for (double& v : w_) v /= sum;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] <= 0.0 || w_[i] >= 1.0) {
      throw ValidationError("WeightVector: component " + std::to_string(i) +
                            " degenerate after normalization");
    }
  }
}

WeightVector WeightVector::uniform(int d) {
  if (d < 2) throw ValidationError("WeightVector: need d >= 2, got " + std::to_string(d));
  return WeightVector(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

double WeightVector::min_component() const {
  return *std::min_element(w_.begin(), w_.end());
}

double WeightVector::l1_distance(const WeightVector& other) const {
  if (other.dim() != dim()) throw DomainError("WeightVector: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) s += std::abs(w_[i] - other.w_[i]);
  return s;
}

}  // namespace wl

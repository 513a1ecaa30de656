#pragma once

#include <cstddef>
#include <vector>

namespace wl {

// A point of the open probability simplex over d >= 2 strata. Construction
// renormalizes (so any finite positive vector is accepted) and rejects
// degenerate components.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(int d);

  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return w_; }

  double min_component() const;
  double l1_distance(const WeightVector& other) const;

 private:
  std::vector<double> w_;
};

}  // namespace wl

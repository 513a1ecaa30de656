#include "wl/updates.hpp"

#include <cmath>
#include <string>

#include "wl/errors.hpp"

namespace wl {
namespace {

void check_args(int dim, int visited_stratum, double gamma) {
  if (visited_stratum < 0 || visited_stratum >= dim) {
    throw DomainError("weight update: stratum index " + std::to_string(visited_stratum) +
                      " out of range for d = " + std::to_string(dim));
  }
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw DomainError("weight update: gamma must be finite and >= 0");
  }
}

}  // namespace

std::vector<double> field_H(const WeightVector& theta, int visited_stratum) {
  check_args(theta.dim(), visited_stratum, 0.0);
  std::vector<double> h(theta.values());
  const double ti = theta[visited_stratum];
  for (int j = 0; j < theta.dim(); ++j) {
    h[static_cast<std::size_t>(j)] *= (j == visited_stratum ? 1.0 : 0.0) - ti;
  }
  return h;
}

namespace detail {

void apply_linearized(std::vector<double>& theta, int visited_stratum, double gamma) {
  // Written so that the arithmetic matches theta + gamma * field_H bitwise.
  const double ti = theta[static_cast<std::size_t>(visited_stratum)];
  for (double& v : theta) v -= gamma * (v * ti);
  theta[static_cast<std::size_t>(visited_stratum)] = ti + gamma * (ti * (1.0 - ti));
}

void apply_standard(std::vector<double>& theta, int visited_stratum, double gamma) {
  const double scale = 1.0 / (1.0 + gamma * theta[static_cast<std::size_t>(visited_stratum)]);
  for (double& v : theta) v *= scale;
  theta[static_cast<std::size_t>(visited_stratum)] *= 1.0 + gamma;
}

}  // namespace detail

WeightVector update_linearized(const WeightVector& theta, int visited_stratum, double gamma) {
  check_args(theta.dim(), visited_stratum, gamma);
  if (gamma >= 1.0) {
    throw DomainError("update_linearized: gamma must lie in [0, 1) to preserve the open simplex");
  }
  std::vector<double> w = theta.values();
  detail::apply_linearized(w, visited_stratum, gamma);
  return WeightVector(std::move(w));
}

WeightVector update_standard(const WeightVector& theta, int visited_stratum, double gamma) {
  check_args(theta.dim(), visited_stratum, gamma);
  std::vector<double> w = theta.values();
  detail::apply_standard(w, visited_stratum, gamma);
  return WeightVector(std::move(w));
}

}  // namespace wl

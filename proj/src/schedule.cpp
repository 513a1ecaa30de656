#include "wl/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wl/errors.hpp"

namespace wl {

ScheduleSpec::ScheduleSpec(double gamma_star, double alpha, std::optional<double> gamma_cap)
    : gamma_star_(gamma_star), alpha_(alpha), gamma_cap_(gamma_cap) {
  if (!std::isfinite(gamma_star) || gamma_star <= 0.0) {
    throw ValidationError("ScheduleSpec: gamma_star must be positive");
  }
  if (!std::isfinite(alpha) || alpha <= 0.5 || alpha > 1.0) {
    throw ValidationError("ScheduleSpec: alpha must lie in (1/2, 1] so that sum gamma_n "
                          "diverges and sum gamma_n^2 converges");
  }
  if (gamma_cap_) {
    if (!std::isfinite(*gamma_cap_) || *gamma_cap_ <= 0.0 || *gamma_cap_ >= 1.0) {
      throw ValidationError("ScheduleSpec: gamma_cap must lie in (0, 1)");
    }
  } else if (gamma_star >= 1.0) {
    throw ValidationError("ScheduleSpec: gamma_star >= 1 makes gamma_1 leave [0, 1); "
                          "set gamma_cap to clip the early steps");
  }
}

double ScheduleSpec::gamma(std::uint64_t n) const {
  if (n == 0) throw DomainError("ScheduleSpec: step index starts at 1");
  const double g = gamma_star_ / std::pow(static_cast<double>(n), alpha_);
  return gamma_cap_ ? std::min(g, *gamma_cap_) : g;
}

}  // namespace wl

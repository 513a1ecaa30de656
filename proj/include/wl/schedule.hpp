#pragma once

#include <cstdint>
#include <optional>

namespace wl {

// Polynomial step-size law gamma_n = gamma_star / n^alpha with alpha in
// (1/2, 1], so that sum gamma_n = infinity and sum gamma_n^2 < infinity.
//
// The default constructor rejects gamma_star >= 1 because gamma_1 would leave
// [0, 1). Passing gamma_cap in (0, 1) instead clips the schedule to
// min(gamma_star / n^alpha, gamma_cap): the clip is active only for finitely
// many n, which is the "satisfied ultimately" relaxation, and the tail (hence
// every asymptotic statement) is unchanged. This is what makes the optimal
// gain gamma_star = d reachable for alpha = 1.
class ScheduleSpec {
 public:
  ScheduleSpec(double gamma_star, double alpha,
               std::optional<double> gamma_cap = std::nullopt);

  // gamma_n for n >= 1; n = 0 is a domain error.
  double gamma(std::uint64_t n) const;

  double gamma_star() const { return gamma_star_; }
  double alpha() const { return alpha_; }
  std::optional<double> gamma_cap() const { return gamma_cap_; }

  // CLT case (i) holds for alpha < 1; case (ii) for alpha = 1 (and then needs
  // gamma_star > d/2, checked where d is known).
  bool clt_case_one() const { return alpha_ < 1.0; }

 private:
  double gamma_star_;
  double alpha_;
  std::optional<double> gamma_cap_;
};

}  // namespace wl

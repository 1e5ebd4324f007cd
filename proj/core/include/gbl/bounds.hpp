#pragma once

#include <cstdint>
#include <functional>

namespace gbl {

// Freedman-style tail bound for a martingale with increments bounded by b and
// predictable variance variance_sum over n steps:
//   sqrt(4 V log(n / delta) + 5 b^2 log^2(n / delta)).
double martingale_bound(double variance_sum, double b, std::int64_t n, double delta);

// High-probability cap on the number of pulls of an arm eliminated at tau
// whose dominating-set deletion time is tau_dom (0 for arms outside D):
//   m + sqrt(4 m log(T/delta) + 5 log^2(T/delta)),
//   m = tau + sum_{s<=tau_dom} gamma_s + tau_dom * sum_{s=tau_dom..T} gamma_s / s.
double pull_count_bound(std::int64_t tau, std::int64_t tau_dom, const std::function<double(std::int64_t)>& gamma,
                        std::int64_t horizon, double delta);

}  // namespace gbl

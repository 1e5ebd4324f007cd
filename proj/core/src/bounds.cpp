#include "gbl/bounds.hpp"

#include <cmath>

#include "gbl/errors.hpp"

namespace gbl {

double martingale_bound(double variance_sum, double b, std::int64_t n, double delta) {
  if (!(variance_sum >= 0.0) || !(b > 0.0) || n < 1 || !(delta > 0.0 && delta < 1.0)) {
    throw InputError("martingale_bound: need V >= 0, b > 0, n >= 1, delta in (0, 1)");
  }
  const double l = std::log(static_cast<double>(n) / delta);
  return std::sqrt(4.0 * variance_sum * l + 5.0 * b * b * l * l);
}

double pull_count_bound(std::int64_t tau, std::int64_t tau_dom, const std::function<double(std::int64_t)>& gamma,
                        std::int64_t horizon, double delta) {
  if (tau < 0 || tau_dom < 0 || horizon < 1) throw InputError("pull_count_bound: negative times or empty horizon");
  double mass = static_cast<double>(tau);
  for (std::int64_t s = 1; s <= tau_dom; ++s) mass += gamma(s);
  if (tau_dom > 0) {
    double tail = 0.0;
    for (std::int64_t s = tau_dom; s <= horizon; ++s) tail += gamma(s) / static_cast<double>(s);
    mass += static_cast<double>(tau_dom) * tail;
  }
  const double l = std::log(static_cast<double>(horizon) / delta);
  return mass + std::sqrt(4.0 * mass * l + 5.0 * l * l);
}

}  // namespace gbl

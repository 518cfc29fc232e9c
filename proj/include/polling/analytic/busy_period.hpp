#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "polling/distribution.hpp"
#include "polling/errors.hpp"
#include "polling/model.hpp"

namespace polling::analytic {

/// 1 - f(omega) for some LST f, together with its derivative in omega.
struct Deficit {
  double value = 0.0;
  double slope = 0.0;
};

inline constexpr std::size_t kBusyPeriodMaxIterations = 1'000'000;

namespace detail {

/// Solves d = g(x + lambda d) for the busy-period deficit d = 1 - pi(x), where
/// g(y) = 1 - beta(y) is the complement of the service LST.
///
/// g is concave and increasing, so F(d) = d - g(x + lambda d) is convex. Newton
/// started at d = 1 (where F > 0) decreases monotonically onto the root that
/// corresponds to the root of pi in (0, 1].
template <class Complement>
Deficit solve_busy_deficit(const Complement& g, double lambda, double x) {
  if (lambda == 0.0) return g(x);
  if (x == 0.0) {
    const Deficit at0 = g(0.0);
    return {0.0, at0.slope / (1.0 - lambda * at0.slope)};
  }
  double d = 1.0;
  for (std::size_t it = 0; it < kBusyPeriodMaxIterations; ++it) {
    const Deficit gy = g(x + lambda * d);
    const double f = d - gy.value;
    const double fp = 1.0 - lambda * gy.slope;
    const double next = d - f / fp;
    if (!(next < d) || d - next <= 1e-16 * next) {
      const double v = std::min(next, d);
      const Deficit at = g(x + lambda * v);
      return {v, at.slope / (1.0 - lambda * at.slope)};
    }
    d = next;
  }
  throw NoConvergence("busy-period fixed point did not converge");
}

}  // namespace detail

inline Deficit service_deficit(const Distribution& d, double omega) {
  return {d.lst_complement(omega), d.lst_complement_slope(omega)};
}

/// 1 - pi(omega), pi the LST of an M/G/1 busy period with the given service and rate.
Deficit busy_period_deficit(const Distribution& service, double lambda, double omega);

/// Root in (0, 1] of pi = beta(omega + lambda (1 - pi)).
double busy_period_lst(const Distribution& service, double lambda, double omega);

/// 1 - beta*_L(omega): low-priority service extended by the busy periods of the
/// high-priority customers arriving during it.
Deficit completion_deficit(const QueueSpec& q, double omega);

/// beta*_L(omega) = beta_L(omega + lambda_H (1 - pi_H(omega))).
double completion_time_lst(const QueueSpec& q, double omega);

/// Deficit of the busy period of low-priority completion times, started by one
/// low-priority customer (exhaustive two-class queue).
Deficit completion_busy_period_deficit(const QueueSpec& q, double omega);

}  // namespace polling::analytic

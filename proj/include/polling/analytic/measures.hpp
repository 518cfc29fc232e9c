#pragma once

#include <cstddef>
#include <vector>

#include "polling/analytic/analyzer.hpp"
#include "polling/analytic/moments.hpp"
#include "polling/model.hpp"

namespace polling::analytic {

/// E(X_iH X_iL): mixed second partial of V_b_i at (1, 1), from one-sided
/// differences of the GF complement with Richardson extrapolation.
MomentEstimate cross_moment(const Analyzer& a, std::size_t i);

/// Closed-form mean waiting time of the high-priority class of queue i.
double mean_wait_high(const Analyzer& a, std::size_t i);

struct LowWait {
  double value = 0.0;
  /// Independent second route (mixed_ge only; equals value for other disciplines).
  double alt_value = 0.0;
};

/// Mean waiting time of the low-priority class of queue i. For mixed_ge the
/// primary value uses the residual cycle plus the cross moment E(X_H X_L);
/// the alternative conditions on arrival in a visit or intervisit period and
/// uses E(V I) = (E(C^2) - E(V^2) - E(I^2)) / 2 from the time-weighted route.
LowWait mean_wait_low(const Analyzer& a, std::size_t i);

double mean_wait(const Analyzer& a, std::size_t i, Priority c);

struct WaitMoments {
  double mean = 0.0;           // first moment from the LST
  double second_moment = 0.0;
  double variance = 0.0;
  double variance_error = 0.0;
};

/// Waiting-time moments by differentiating the waiting-time LST. Raises
/// IllConditioned when the variance error estimate exceeds 0.5% of its value.
WaitMoments wait_moments(const Analyzer& a, std::size_t i, Priority c);

/// E(Z_ii): work left at queue i when the server departs.
double leftover_work(const Analyzer& a, std::size_t i);

struct ClassResult {
  std::size_t queue = 0;  // zero-based
  Priority cls = Priority::high;
  Discipline discipline = Discipline::gated;
  double mean_wait = 0.0;
  double var_wait = 0.0;
  double mean_qlen = 0.0;
};

struct PeriodMoments {
  double first = 0.0;
  double second = 0.0;
};

struct QueueMoments {
  PeriodMoments cycle;
  PeriodMoments intervisit;
  PeriodMoments visit;
  double cross_moment = 0.0;  // NaN unless mixed_ge with both classes
  double leftover_work = 0.0;
};

struct PclResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

struct PerfReport {
  std::vector<ClassResult> classes;
  std::vector<QueueMoments> queues;
  PclResult pcl;
};

/// Right-hand side of the pseudo-conservation law (model parameters plus E(Z_ii)).
double pcl_rhs(const Analyzer& a);

/// Conservation-law check using the mean waits recorded in `report`.
PclResult pcl_check(const Analyzer& a, const PerfReport& report);
/// Conservation-law check with freshly computed mean waits.
PclResult pcl_check(const Analyzer& a);

PerfReport analyze(const Analyzer& a);
PerfReport analyze(const PollingModel& model);

}  // namespace polling::analytic

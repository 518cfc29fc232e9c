#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "polling/model.hpp"

namespace fixtures {

using polling::Discipline;
using polling::Distribution;
using polling::PollingModel;
using polling::QueueSpec;

inline QueueSpec queue(double high, double low, Discipline d) {
  return QueueSpec{high, low, Distribution::exponential(1.0), Distribution::exponential(1.0), d};
}

/// Two queues; Q1 has both classes, Q2 only low priority (gated).
inline PollingModel example1(Discipline q1 = Discipline::mixed_ge) {
  PollingModel m;
  m.queues = {queue(0.2, 0.4, q1), queue(0.0, 0.2, Discipline::gated)};
  m.switchovers = {Distribution::exponential(1.0), Distribution::exponential(1.0)};
  return m;
}

inline PollingModel example1_det(Discipline q1 = Discipline::mixed_ge) {
  PollingModel m = example1(q1);
  m.switchovers = {Distribution::deterministic(10.0), Distribution::deterministic(10.0)};
  return m;
}

inline PollingModel example2(Discipline q1 = Discipline::mixed_ge, Discipline q2 = Discipline::mixed_ge) {
  PollingModel m;
  m.queues = {queue(0.1, 0.1, q1), queue(0.35, 0.35, q2)};
  m.switchovers = {Distribution::exponential(10.0), Distribution::exponential(10.0)};
  return m;
}

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::string config(const std::string& name) { return std::string(POLLING_CONFIG_DIR) + "/" + name; }
inline std::string golden(const std::string& name) { return std::string(POLLING_GOLDEN_DIR) + "/" + name; }

}  // namespace fixtures

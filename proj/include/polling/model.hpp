#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "polling/distribution.hpp"

namespace polling {

/// Service discipline of a queue with a high and a low priority class.
///
/// In every discipline high-priority customers are served before low-priority
/// ones and service is non-preemptive. The disciplines differ in which
/// customers are eligible during a visit:
///  - gated: only customers (of both classes) present at the visit beginning;
///  - exhaustive: everyone, including arrivals during the visit;
///  - mixed_ge: low priority gated, high priority exhaustive (high-priority
///    arrivals pass the gate).
enum class Discipline { gated, exhaustive, mixed_ge };

enum class Priority { high, low };

std::string_view to_string(Discipline d);
Discipline discipline_from_string(std::string_view name);
std::string_view to_string(Priority p);

struct QueueSpec {
  double lambda_high = 0.0;
  double lambda_low = 0.0;
  Distribution service_high;
  Distribution service_low;
  Discipline discipline = Discipline::mixed_ge;

  double lambda(Priority p) const { return p == Priority::high ? lambda_high : lambda_low; }
  const Distribution& service(Priority p) const { return p == Priority::high ? service_high : service_low; }
  double rho_high() const { return lambda_high * service_high.mean(); }
  double rho_low() const { return lambda_low * service_low.mean(); }
  double rho() const { return rho_high() + rho_low(); }
  double total_rate() const { return lambda_high + lambda_low; }
};

/// N queues visited cyclically; switchovers[i] is incurred after the visit to queue i.
struct PollingModel {
  std::vector<QueueSpec> queues;
  std::vector<Distribution> switchovers;

  std::size_t size() const { return queues.size(); }
};

struct DerivedRates {
  std::vector<double> rho_high;
  std::vector<double> rho_low;
  std::vector<double> rho_queue;
  double rho_total = 0.0;
  double switchover_mean = 0.0;           // E(S), S = S_1 + ... + S_N
  double switchover_second_moment = 0.0;  // E(S^2)
  double mean_cycle = 0.0;
  std::vector<double> mean_intervisit;
  std::vector<double> mean_visit;
};

struct ValidationOptions {
  /// Accept queues without arrivals (only meaningful for simulation).
  bool allow_idle_queues = false;
};

/// Checks the model and returns its closed-form rates.
///
/// Throws NonpositiveParameter on structural problems, ZeroSwitchover when no
/// switch-over has positive mean and UnstableSystem when rho >= 1.
DerivedRates validate(const PollingModel& model, ValidationOptions options = {});

}  // namespace polling

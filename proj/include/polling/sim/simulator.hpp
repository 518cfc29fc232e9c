#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "polling/model.hpp"

namespace polling::sim {

/// Snapshot taken whenever a customer is taken into service.
struct ServiceRecord {
  double time = 0.0;
  std::size_t queue = 0;
  Priority cls = Priority::high;
  double arrival_time = 0.0;
  double visit_begin = 0.0;
  std::size_t high_waiting = 0;    // high-priority customers still in line at queue
  std::size_t high_in_front = 0;   // of which in front of the gate (gated discipline)
  std::size_t low_in_front = 0;    // low-priority customers in front of the gate, excluding this one
  bool server_busy_before = false; // a service was still running when this one started
};

struct RunOptions {
  /// Called at every service start (warmup included). Meant for trace checks in tests.
  std::function<void(const ServiceRecord&)> on_service_start;
};

struct ClassRun {
  std::size_t count = 0;
  double mean_wait = 0.0;
  double var_wait = 0.0;
  double mean_qlen = 0.0;  // time-average number in system (waiting or in service)
};

struct PeriodRun {
  std::size_t count = 0;
  double mean = 0.0;
  double second_moment = 0.0;
};

struct QueueRun {
  ClassRun high;
  ClassRun low;
  PeriodRun cycle;       // visit beginning to next visit beginning
  PeriodRun visit;
  PeriodRun intervisit;
  double visit_fraction = 0.0;
};

struct RunResult {
  std::vector<QueueRun> queues;
  double busy_fraction = 0.0;
  double observed_time = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_cycles = 0;
  std::size_t warmup_cycles = 0;
};

/// Simulates the polling system until queue 1 has completed `n_cycles`
/// cycles. Statistics cover the period after the first `warmup_cycles` cycles
/// and only customers arriving in it.
///
/// Events at equal timestamps are processed completions first, then arrivals,
/// then in scheduling order; a high-priority arrival at the instant a visit
/// ends therefore misses that visit.
RunResult run(const PollingModel& model, std::uint64_t seed, std::size_t n_cycles, std::size_t warmup_cycles,
              const RunOptions& options = {});

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% confidence half-width across replications

  bool covers(double x, double widths = 1.0) const { return x >= mean - widths * half_width && x <= mean + widths * half_width; }
};

struct ClassStats {
  Estimate mean_wait;
  Estimate var_wait;
  Estimate mean_qlen;
  std::size_t n_samples = 0;
};

struct QueueStats {
  ClassStats high;
  ClassStats low;
  Estimate cycle_mean, cycle_second;
  Estimate visit_mean, visit_second;
  Estimate intervisit_mean, intervisit_second;
  Estimate visit_fraction;
};

struct SimStats {
  std::vector<QueueStats> queues;
  Estimate busy_fraction;
  std::uint64_t base_seed = 0;
  std::size_t n_reps = 0;
  std::size_t n_cycles = 0;
  std::size_t warmup_cycles = 0;
  std::vector<std::uint64_t> seeds;
};

struct ReplicateOptions {
  /// Worker threads; 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// Seed of replication `index`, derived from `base_seed` through std::seed_seq.
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t index);

/// Runs independent replications and merges them into across-replication
/// means and t-based 95% confidence half-widths. Bit-reproducible for fixed
/// inputs regardless of thread count.
SimStats replicate(const PollingModel& model, std::uint64_t base_seed, std::size_t n_reps, std::size_t n_cycles,
                   std::size_t warmup_cycles, ReplicateOptions options = {});

/// Merges finished runs (the replicate() reduction step).
SimStats merge_runs(const std::vector<RunResult>& runs);

}  // namespace polling::sim

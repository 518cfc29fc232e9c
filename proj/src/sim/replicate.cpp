#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "polling/errors.hpp"
#include "polling/sim/simulator.hpp"

namespace polling::sim {

namespace {

Estimate estimate(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  Estimate e;
  if (n == 0) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(n);
  if (n < 2) {
    e.half_width = std::numeric_limits<double>::infinity();
    return e;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t t(static_cast<double>(n - 1));
  e.half_width = boost::math::quantile(t, 0.975) * sd / std::sqrt(static_cast<double>(n));
  return e;
}

template <class F>
Estimate across(const std::vector<RunResult>& runs, F field) {
  std::vector<double> xs;
  xs.reserve(runs.size());
  for (const RunResult& r : runs) xs.push_back(field(r));
  return estimate(xs);
}

ClassStats class_stats(const std::vector<RunResult>& runs, std::size_t i, Priority c) {
  auto pick = [i, c](const RunResult& r) -> const ClassRun& {
    return c == Priority::high ? r.queues[i].high : r.queues[i].low;
  };
  ClassStats s;
  s.mean_wait = across(runs, [&](const RunResult& r) { return pick(r).mean_wait; });
  s.var_wait = across(runs, [&](const RunResult& r) { return pick(r).var_wait; });
  s.mean_qlen = across(runs, [&](const RunResult& r) { return pick(r).mean_qlen; });
  for (const RunResult& r : runs) s.n_samples += pick(r).count;
  return s;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t index) {
  const std::uint64_t idx = index;
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SimStats merge_runs(const std::vector<RunResult>& runs) {
  SimStats s;
  if (runs.empty()) return s;
  s.n_reps = runs.size();
  s.n_cycles = runs.front().n_cycles;
  s.warmup_cycles = runs.front().warmup_cycles;
  for (const RunResult& r : runs) s.seeds.push_back(r.seed);
  s.busy_fraction = across(runs, [](const RunResult& r) { return r.busy_fraction; });
  const std::size_t n = runs.front().queues.size();
  for (std::size_t i = 0; i < n; ++i) {
    QueueStats q;
    q.high = class_stats(runs, i, Priority::high);
    q.low = class_stats(runs, i, Priority::low);
    q.cycle_mean = across(runs, [i](const RunResult& r) { return r.queues[i].cycle.mean; });
    q.cycle_second = across(runs, [i](const RunResult& r) { return r.queues[i].cycle.second_moment; });
    q.visit_mean = across(runs, [i](const RunResult& r) { return r.queues[i].visit.mean; });
    q.visit_second = across(runs, [i](const RunResult& r) { return r.queues[i].visit.second_moment; });
    q.intervisit_mean = across(runs, [i](const RunResult& r) { return r.queues[i].intervisit.mean; });
    q.intervisit_second = across(runs, [i](const RunResult& r) { return r.queues[i].intervisit.second_moment; });
    q.visit_fraction = across(runs, [i](const RunResult& r) { return r.queues[i].visit_fraction; });
    s.queues.push_back(q);
  }
  return s;
}

SimStats replicate(const PollingModel& model, std::uint64_t base_seed, std::size_t n_reps, std::size_t n_cycles,
                   std::size_t warmup_cycles, ReplicateOptions options) {
  if (n_reps < 2) throw NonpositiveParameter("n_reps must be at least 2");
  validate(model, ValidationOptions{.allow_idle_queues = true});
  if (n_cycles <= warmup_cycles) throw NonpositiveParameter("n_cycles must exceed warmup_cycles");

  std::vector<RunResult> runs(n_reps);
  std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n_reps);

  // Replication r always uses seed r, so the assignment to workers does not matter.
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](std::size_t w) {
    try {
      for (std::size_t r = w; r < n_reps; r += threads)
        runs[r] = run(model, replication_seed(base_seed, r), n_cycles, warmup_cycles);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SimStats s = merge_runs(runs);
  s.base_seed = base_seed;
  return s;
}

}  // namespace polling::sim

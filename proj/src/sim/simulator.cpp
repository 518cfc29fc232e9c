#include "polling/sim/simulator.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

#include "polling/errors.hpp"
#include "polling/rng.hpp"

namespace polling::sim {

namespace {

// Processing order at equal timestamps.
enum class EventKind : int { service_complete = 0, switchover_complete = 1, arrival = 2 };

struct Event {
  double time;
  EventKind kind;
  std::uint64_t sequence;
  std::size_t queue;
  Priority cls;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
    return a.sequence > b.sequence;
  }
};

struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct PeriodSums {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  PeriodRun result() const {
    if (n == 0) return {};
    return {n, sum / static_cast<double>(n), sum_sq / static_cast<double>(n)};
  }
};

// Waiting line of one class. Customers in front of `eligible` may be served
// during the current visit when the class is gated.
struct Line {
  std::deque<double> arrivals;
  std::size_t eligible = 0;
  std::size_t in_service = 0;
  double area = 0.0;
  double last_change = 0.0;
  Welford waits;

  std::size_t in_system() const { return arrivals.size() + in_service; }
};

struct QueueState {
  Line high;
  Line low;
  double visit_begin = 0.0;
  double visit_end = 0.0;
  bool visited = false;
  PeriodSums cycle, visit, intervisit;
};

class Simulation {
 public:
  Simulation(const PollingModel& model, std::uint64_t seed, std::size_t n_cycles, std::size_t warmup,
             const RunOptions& options)
      : model_(model), rng_(seed), n_cycles_(n_cycles), warmup_(warmup), options_(options), queues_(model.size()) {}

  RunResult execute() {
    for (std::size_t i = 0; i < model_.size(); ++i) {
      schedule_arrival(i, Priority::high, 0.0);
      schedule_arrival(i, Priority::low, 0.0);
    }
    if (warmup_ == 0) start_observation(0.0);
    begin_visit(0, 0.0);

    while (!finished_) {
      const Event e = events_.top();
      events_.pop();
      switch (e.kind) {
        case EventKind::arrival: on_arrival(e); break;
        case EventKind::service_complete: on_service_complete(e.time); break;
        case EventKind::switchover_complete: begin_visit((current_ + 1) % model_.size(), e.time); break;
      }
    }
    return collect();
  }

 private:
  void push(double time, EventKind kind, std::size_t queue, Priority cls) {
    events_.push(Event{time, kind, sequence_++, queue, cls});
  }

  void schedule_arrival(std::size_t i, Priority c, double now) {
    const double rate = model_.queues[i].lambda(c);
    if (rate <= 0.0) return;
    push(now + rng_.exponential(1.0 / rate), EventKind::arrival, i, c);
  }

  Line& line(std::size_t i, Priority c) { return c == Priority::high ? queues_[i].high : queues_[i].low; }

  void touch(Line& l, double now) {
    if (observing_) l.area += static_cast<double>(l.in_system()) * (now - l.last_change);
    l.last_change = now;
  }

  void start_observation(double now) {
    observing_ = true;
    observe_from_ = now;
    for (QueueState& q : queues_) {
      q.high.last_change = now;
      q.low.last_change = now;
    }
  }

  void on_arrival(const Event& e) {
    Line& l = line(e.queue, e.cls);
    touch(l, e.time);
    l.arrivals.push_back(e.time);
    schedule_arrival(e.queue, e.cls, e.time);
  }

  void begin_visit(std::size_t i, double now) {
    current_ = i;
    QueueState& q = queues_[i];
    if (q.visited && observing_ && q.visit_begin >= observe_from_) {
      q.cycle.add(now - q.visit_begin);
      q.visit.add(q.visit_end - q.visit_begin);
      q.intervisit.add(now - q.visit_end);
    }
    if (i == 0) {
      ++visits_of_first_;
      if (visits_of_first_ == warmup_ + 1 && !observing_) start_observation(now);
      if (visits_of_first_ == n_cycles_ + 1) {
        finish(now);
        return;
      }
    }
    q.visited = true;
    q.visit_begin = now;
    // The gate goes behind everyone present; only gated classes use it.
    q.high.eligible = q.high.arrivals.size();
    q.low.eligible = q.low.arrivals.size();
    serve_next(now);
  }

  void serve_next(double now) {
    const std::size_t i = current_;
    QueueState& q = queues_[i];
    const Discipline d = model_.queues[i].discipline;

    Priority pick;
    if (d == Discipline::gated) {
      if (q.high.eligible > 0) pick = Priority::high;
      else if (q.low.eligible > 0) pick = Priority::low;
      else return end_visit(now);
    } else {
      const bool low_available = d == Discipline::exhaustive ? !q.low.arrivals.empty() : q.low.eligible > 0;
      if (!q.high.arrivals.empty()) pick = Priority::high;
      else if (low_available) pick = Priority::low;
      else return end_visit(now);
    }

    Line& l = line(i, pick);
    const double arrival = l.arrivals.front();
    touch(l, now);
    l.arrivals.pop_front();
    if (l.eligible > 0) --l.eligible;
    l.in_service = 1;
    if (options_.on_service_start) {
      ServiceRecord r;
      r.time = now;
      r.queue = i;
      r.cls = pick;
      r.arrival_time = arrival;
      r.visit_begin = q.visit_begin;
      r.high_waiting = q.high.arrivals.size();
      r.high_in_front = q.high.eligible;
      r.low_in_front = q.low.eligible;
      r.server_busy_before = in_service_;
      options_.on_service_start(r);
    }
    if (observing_ && arrival >= observe_from_) l.waits.add(now - arrival);

    const double duration = model_.queues[i].service(pick).sample(rng_);
    serving_ = pick;
    in_service_ = true;
    service_start_ = now;
    push(now + duration, EventKind::service_complete, i, pick);
  }

  void on_service_complete(double now) {
    Line& l = line(current_, serving_);
    touch(l, now);
    l.in_service = 0;
    in_service_ = false;
    add_busy(service_start_, now);
    serve_next(now);
  }

  void add_busy(double from, double to) {
    if (!observing_) return;
    from = std::max(from, observe_from_);
    if (to > from) busy_time_ += to - from;
  }

  void end_visit(double now) {
    QueueState& q = queues_[current_];
    q.visit_end = now;
    push(now + model_.switchovers[current_].sample(rng_), EventKind::switchover_complete, current_, Priority::high);
  }

  void finish(double now) {
    finished_ = true;
    end_time_ = now;
    for (QueueState& q : queues_) {
      touch(q.high, now);
      touch(q.low, now);
    }
  }

  RunResult collect() const {
    RunResult r;
    const double span = end_time_ - observe_from_;
    r.observed_time = span;
    r.busy_fraction = span > 0.0 ? busy_time_ / span : 0.0;
    r.n_cycles = n_cycles_;
    r.warmup_cycles = warmup_;
    for (const QueueState& q : queues_) {
      QueueRun qr;
      auto class_run = [span](const Line& l) {
        return ClassRun{l.waits.n, l.waits.mean, l.waits.variance(), span > 0.0 ? l.area / span : 0.0};
      };
      qr.high = class_run(q.high);
      qr.low = class_run(q.low);
      qr.cycle = q.cycle.result();
      qr.visit = q.visit.result();
      qr.intervisit = q.intervisit.result();
      qr.visit_fraction = q.cycle.sum > 0.0 ? q.visit.sum / q.cycle.sum : 0.0;
      r.queues.push_back(qr);
    }
    return r;
  }

  const PollingModel& model_;
  RngStream rng_;
  std::size_t n_cycles_;
  std::size_t warmup_;
  const RunOptions& options_;
  std::vector<QueueState> queues_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::uint64_t sequence_ = 0;

  std::size_t current_ = 0;
  std::size_t visits_of_first_ = 0;
  bool observing_ = false;
  double observe_from_ = std::numeric_limits<double>::infinity();
  bool finished_ = false;
  double end_time_ = 0.0;

  Priority serving_ = Priority::high;
  bool in_service_ = false;
  double service_start_ = 0.0;
  double busy_time_ = 0.0;
};

}  // namespace

RunResult run(const PollingModel& model, std::uint64_t seed, std::size_t n_cycles, std::size_t warmup_cycles,
              const RunOptions& options) {
  validate(model, ValidationOptions{.allow_idle_queues = true});
  if (n_cycles <= warmup_cycles) throw NonpositiveParameter("n_cycles must exceed warmup_cycles");
  Simulation sim(model, seed, n_cycles, warmup_cycles, options);
  RunResult r = sim.execute();
  r.seed = seed;
  return r;
}

}  // namespace polling::sim

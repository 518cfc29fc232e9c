#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "polling/analytic/measures.hpp"
#include "polling/analytic/report.hpp"
#include "polling/errors.hpp"
#include "polling/sim/simulator.hpp"

using namespace polling;
using namespace polling::sim;

namespace {

std::string csv(const PollingModel& m, const SimStats& s) {
  std::ostringstream os;
  analytic::write_sim_csv(os, m, s);
  return os.str();
}

}  // namespace

TEST_CASE("replications are reproducible") {
  const PollingModel m = fixtures::example1();
  ReplicateOptions one, three;
  one.threads = 1;
  three.threads = 3;
  const SimStats a = replicate(m, 5, 4, 2000, 200, one);
  const SimStats b = replicate(m, 5, 4, 2000, 200, three);
  CHECK(csv(m, a) == csv(m, b));
  CHECK(a.seeds == b.seeds);
  CHECK(a.queues[0].cycle_second.mean == b.queues[0].cycle_second.mean);
  CHECK(a.busy_fraction.mean == b.busy_fraction.mean);

  const SimStats c = replicate(m, 6, 4, 2000, 200, one);
  CHECK(csv(m, a) != csv(m, c));
  CHECK(replication_seed(5, 0) != replication_seed(5, 1));
}

TEST_CASE("empty system cycles are the switch-over sum") {
  PollingModel m;
  m.queues = {fixtures::queue(0.0, 0.0, Discipline::mixed_ge)};
  m.switchovers = {Distribution::deterministic(3.0)};
  const RunResult r = run(m, 1, 100, 10);
  CHECK(r.queues[0].cycle.count == 90);
  CHECK(r.queues[0].cycle.mean == 3.0);
  CHECK(r.queues[0].cycle.second_moment == 9.0);
  CHECK(r.queues[0].visit.mean == 0.0);
  CHECK(r.busy_fraction == 0.0);

  PollingModel two = m;
  two.queues.push_back(fixtures::queue(0.0, 0.0, Discipline::gated));
  two.switchovers.push_back(Distribution::deterministic(1.5));
  const RunResult r2 = run(two, 1, 50, 0);
  CHECK(r2.queues[0].cycle.mean == 4.5);
  CHECK(r2.queues[1].intervisit.mean == 4.5);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(run(fixtures::example1(), 1, 10, 10), NonpositiveParameter);
  CHECK_THROWS_AS(replicate(fixtures::example1(), 1, 1, 100, 10), NonpositiveParameter);
  PollingModel unstable = fixtures::example1();
  unstable.queues[1].lambda_low = 0.5;
  CHECK_THROWS_AS(run(unstable, 1, 100, 10), UnstableSystem);
}

TEST_CASE("service order respects priority, gate and non-preemption") {
  for (Discipline d : {Discipline::gated, Discipline::exhaustive, Discipline::mixed_ge}) {
    CAPTURE(to_string(d));
    const PollingModel m = fixtures::example2(d, d);
    std::size_t low_served = 0, violations = 0, behind_gate = 0, late_high = 0;
    RunOptions o;
    o.on_service_start = [&](const ServiceRecord& r) {
      if (r.server_busy_before) ++violations;
      if (r.cls == Priority::low) {
        ++low_served;
        if (d == Discipline::gated ? r.high_in_front > 0 : r.high_waiting > 0) ++violations;
        if (d != Discipline::exhaustive && r.arrival_time > r.visit_begin) ++behind_gate;
      } else if (d == Discipline::gated && r.arrival_time > r.visit_begin) {
        ++late_high;
      }
    };
    run(m, 11, 3000, 0, o);
    CHECK(low_served > 1000);
    CHECK(violations == 0);
    CHECK(behind_gate == 0);
    CHECK(late_high == 0);
  }
}

TEST_CASE("exhaustive and mixed queues serve customers arriving during the visit") {
  // Complements the gate check above: arrivals behind the gate do get served
  // in the same visit where the discipline allows it.
  std::size_t during_visit_high = 0, during_visit_low = 0;
  RunOptions o;
  o.on_service_start = [&](const ServiceRecord& r) {
    if (r.arrival_time > r.visit_begin) ++(r.cls == Priority::high ? during_visit_high : during_visit_low);
  };
  run(fixtures::example2(Discipline::exhaustive, Discipline::mixed_ge), 3, 2000, 0, o);
  CHECK(during_visit_high > 0);
  CHECK(during_visit_low > 0);
}

TEST_CASE("simulation agrees with the analytic results on Example 1") {
  const PollingModel m = fixtures::example1();
  const SimStats s = replicate(m, 1, 10, 20000, 2000);
  const analytic::Analyzer a(m);
  const analytic::PerfReport r = analytic::analyze(a);
  auto within = [](const Estimate& e, double x) {
    CAPTURE(e.mean);
    CAPTURE(e.half_width);
    CAPTURE(x);
    CHECK(std::isfinite(e.half_width));
    CHECK(e.covers(x, 3.0));
  };
  within(s.queues[0].high.mean_wait, r.classes[0].mean_wait);
  within(s.queues[0].low.mean_wait, r.classes[1].mean_wait);
  within(s.queues[1].low.mean_wait, r.classes[2].mean_wait);
  within(s.queues[0].high.var_wait, r.classes[0].var_wait);
  within(s.queues[0].high.mean_qlen, r.classes[0].mean_qlen);
  within(s.queues[0].low.mean_qlen, r.classes[1].mean_qlen);
  for (std::size_t i = 0; i < 2; ++i) {
    within(s.queues[i].cycle_mean, r.queues[i].cycle.first);
    within(s.queues[i].cycle_second, r.queues[i].cycle.second);
    within(s.queues[i].intervisit_second, r.queues[i].intervisit.second);
    within(s.queues[i].visit_second, r.queues[i].visit.second);
    within(s.queues[i].visit_fraction, m.queues[i].rho());
  }
  within(s.busy_fraction, 0.8);
  CHECK(s.queues[0].high.n_samples > 0);
  CHECK(s.queues[1].high.n_samples == 0);
}

TEST_CASE("gated tags without high-priority arrivals match the gated column") {
  // Merging Q1's classes under a gate over both leaves the cycle unchanged, so
  // the single-class wait is the rate-weighted mean of the two gated entries.
  PollingModel m = fixtures::example1(Discipline::gated);
  m.queues[0].lambda_high = 0.0;
  m.queues[0].lambda_low = 0.6;
  const SimStats s = replicate(m, 1, 10, 20000, 2000);
  CHECK(s.queues[0].low.mean_wait.covers((0.2 * 9.578 + 0.4 * 14.366) / 0.6));
  CHECK(s.queues[1].low.mean_wait.covers(9.690));
}

TEST_CASE("reference values fall inside simulated confidence intervals") {
  const SimStats e2 = replicate(fixtures::example2(), 1, 10, 5000, 500);
  CHECK(e2.queues[1].high.mean_wait.covers(17.10));

  const SimStats det = replicate(fixtures::example1_det(Discipline::gated), 1, 10, 20000, 2000);
  CHECK(det.queues[1].low.mean_wait.covers(63.251));
}

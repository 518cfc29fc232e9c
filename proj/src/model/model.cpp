#include "polling/model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "polling/errors.hpp"

namespace polling {

namespace {
std::string format_rho(double rho) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "unstable system: rho = %.6g >= 1", rho);
  return buf;
}
}  // namespace

UnstableSystem::UnstableSystem(double rho) : Error(format_rho(rho)), rho_(rho) {}

ZeroSwitchover::ZeroSwitchover() : Error("at least one switch-over time must have positive mean") {}

std::string_view to_string(Discipline d) {
  switch (d) {
    case Discipline::gated: return "gated";
    case Discipline::exhaustive: return "exhaustive";
    case Discipline::mixed_ge: return "mixed_ge";
  }
  return "?";
}

Discipline discipline_from_string(std::string_view name) {
  for (Discipline d : {Discipline::gated, Discipline::exhaustive, Discipline::mixed_ge}) {
    if (to_string(d) == name) return d;
  }
  throw SchemaError("unknown discipline '" + std::string(name) + "'");
}

std::string_view to_string(Priority p) { return p == Priority::high ? "H" : "L"; }

DerivedRates validate(const PollingModel& model, ValidationOptions options) {
  const std::size_t n = model.size();
  if (n == 0) throw NonpositiveParameter("model needs at least one queue");
  if (model.switchovers.size() != n) throw NonpositiveParameter("need exactly one switch-over per queue");

  DerivedRates r;
  for (std::size_t i = 0; i < n; ++i) {
    const QueueSpec& q = model.queues[i];
    if (!std::isfinite(q.lambda_high) || !std::isfinite(q.lambda_low) || q.lambda_high < 0.0 || q.lambda_low < 0.0)
      throw NonpositiveParameter("queue " + std::to_string(i + 1) + ": arrival rates must be >= 0");
    if (!options.allow_idle_queues && q.total_rate() <= 0.0)
      throw NonpositiveParameter("queue " + std::to_string(i + 1) + ": needs a positive arrival rate");
    r.rho_high.push_back(q.rho_high());
    r.rho_low.push_back(q.rho_low());
    r.rho_queue.push_back(q.rho());
    r.rho_total += q.rho();
  }

  double var_sum = 0.0;
  for (const Distribution& s : model.switchovers) {
    const double m = s.mean();
    r.switchover_mean += m;
    var_sum += s.moment(2) - m * m;
  }
  if (r.switchover_mean <= 0.0) throw ZeroSwitchover();
  if (!(r.rho_total < 1.0)) throw UnstableSystem(r.rho_total);

  r.switchover_second_moment = var_sum + r.switchover_mean * r.switchover_mean;
  r.mean_cycle = r.switchover_mean / (1.0 - r.rho_total);
  for (std::size_t i = 0; i < n; ++i) {
    r.mean_visit.push_back(r.rho_queue[i] * r.mean_cycle);
    r.mean_intervisit.push_back((1.0 - r.rho_queue[i]) * r.mean_cycle);
  }
  return r;
}

}  // namespace polling

#include "polling/analytic/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polling/analytic/busy_period.hpp"
#include "polling/errors.hpp"

namespace polling::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_domain(double omega, double max_omega, const char* what) {
  if (!(omega >= 0.0)) throw UnsupportedEvaluation(std::string(what) + ": omega must be >= 0");
  if (omega > max_omega * (1.0 + 1e-15))
    throw UnsupportedEvaluation(std::string(what) + ": omega beyond the range of the GF substitution");
}

}  // namespace

Analyzer::Analyzer(PollingModel model, AnalyzerOptions options)
    : gf_(std::move(model), options.gf), rates_(validate(gf_.model())) {}

const QueueSpec& Analyzer::queue(std::size_t i) const {
  if (i >= size()) throw UnsupportedEvaluation("queue index out of range");
  return model().queues[i];
}

double Analyzer::completion_time_lst(std::size_t i, double omega) const {
  require_domain(omega, kInf, "completion_time_lst");
  return analytic::completion_time_lst(queue(i), omega);
}

double Analyzer::gf_visit_beginning(std::size_t i, std::span<const double> z) const { return gf_(i, z); }

double Analyzer::cycle_complement(std::size_t i, double omega) const {
  const QueueSpec& q = queue(i);
  switch (q.discipline) {
    case Discipline::mixed_ge:
      // Low-priority customers at a visit beginning arrived during the previous cycle.
      if (q.lambda_low <= 0.0) throw UnsupportedEvaluation("cycle_time_lst needs lambda_low > 0");
      require_domain(omega, q.lambda_low, "cycle_time_lst");
      return gf_.marginal_complement(i, 0.0, std::min(1.0, omega / q.lambda_low));
    case Discipline::gated: {
      // Both classes at a visit beginning arrived during the previous cycle.
      const double total = q.total_rate();
      require_domain(omega, total, "cycle_time_lst");
      const double u = std::min(1.0, omega / total);
      return gf_.marginal_complement(i, u, u);
    }
    case Discipline::exhaustive:
      throw UnsupportedEvaluation(
          "cycle_time_lst: visit-beginning counts of an exhaustive queue reflect the intervisit time only");
  }
  return 0.0;
}

double Analyzer::intervisit_complement(std::size_t i, double omega) const {
  const QueueSpec& q = queue(i);
  switch (q.discipline) {
    case Discipline::mixed_ge:
      // High-priority customers at a visit beginning arrived during the intervisit time.
      if (q.lambda_high <= 0.0) throw UnsupportedEvaluation("intervisit_lst needs lambda_high > 0");
      require_domain(omega, q.lambda_high, "intervisit_lst");
      return gf_.marginal_complement(i, std::min(1.0, omega / q.lambda_high), 0.0);
    case Discipline::exhaustive: {
      const double total = q.total_rate();
      require_domain(omega, total, "intervisit_lst");
      const double u = std::min(1.0, omega / total);
      return gf_.marginal_complement(i, u, u);
    }
    case Discipline::gated:
      throw UnsupportedEvaluation(
          "intervisit_lst: visit-beginning counts of a gated queue reflect the whole cycle");
  }
  return 0.0;
}

double Analyzer::cycle_time_lst(std::size_t i, double omega) const { return 1.0 - cycle_complement(i, omega); }

double Analyzer::intervisit_lst(std::size_t i, double omega) const {
  return 1.0 - intervisit_complement(i, omega);
}

std::pair<double, double> Analyzer::visit_deficits(std::size_t i, double omega) const {
  const QueueSpec& q = queue(i);
  switch (q.discipline) {
    case Discipline::gated:
      return {q.service_high.lst_complement(omega), q.service_low.lst_complement(omega)};
    case Discipline::mixed_ge: {
      const double high = busy_period_deficit(q.service_high, q.lambda_high, omega).value;
      return {high, q.service_low.lst_complement(omega + q.lambda_high * high)};
    }
    case Discipline::exhaustive: {
      const double low = completion_busy_period_deficit(q, omega).value;
      return {busy_period_deficit(q.service_high, q.lambda_high, q.lambda_low * low + omega).value, low};
    }
  }
  return {0.0, 0.0};
}

double Analyzer::visit_time_lst(std::size_t i, double omega) const {
  require_domain(omega, kInf, "visit_time_lst");
  const auto [uh, ul] = visit_deficits(i, omega);
  return std::exp(gf_.marginal_log(i, uh, ul));
}

double Analyzer::joint_visit_intervisit_lst(std::size_t i, double visit_omega, double intervisit_omega) const {
  require_domain(visit_omega, kInf, "joint_visit_intervisit_lst");
  require_domain(intervisit_omega, kInf, "joint_visit_intervisit_lst");
  return std::exp(gf_.marginal_log(i, 0.0, 0.0, {intervisit_omega, visit_omega}));
}

double Analyzer::max_waiting_omega(std::size_t i, Priority c) const {
  const QueueSpec& q = queue(i);
  if (q.discipline == Discipline::gated) return kInf;
  if (c == Priority::high) return q.discipline == Discipline::mixed_ge ? q.lambda_high : q.total_rate();
  return q.lambda_low;
}

double Analyzer::waiting_value(std::size_t i, Priority c, double omega) const {
  const QueueSpec& q = queue(i);
  const double rho_h = q.rho_high();
  const double rho_l = q.rho_low();
  const double rho_i = rho_h + rho_l;
  const double mean_cycle = rates_.mean_cycle;

  if (q.discipline == Discipline::gated) {
    // W_H = C_res + services of high arrivals in C_past;
    // W_L = C_res + services of high arrivals in C + low arrivals in C_past.
    const double ch = q.lambda_high * q.service_high.lst_complement(omega);
    double past = ch, residual = omega;
    if (c == Priority::low) {
      past = ch + q.lambda_low * q.service_low.lst_complement(omega);
      residual = omega + ch;
    }
    auto joint_cycle = [&](double w) { return gf_.marginal_complement(i, 0.0, 0.0, {w, w}); };
    return (joint_cycle(past) - joint_cycle(residual)) / ((past - residual) * mean_cycle);
  }

  if (c == Priority::high) {
    // Delay-cycle form: M/G/1 term times a vacation that is either a low-priority
    // service or an intervisit time.
    const double mean_intervisit = rates_.mean_intervisit[i];
    const double a = (1.0 - rho_h) * omega / (omega - q.lambda_high * q.service_high.lst_complement(omega));
    double b = (1.0 - rho_i) / (1.0 - rho_h) * intervisit_complement(i, omega) / (omega * mean_intervisit);
    if (rho_l > 0.0) b += rho_l / (1.0 - rho_h) * q.service_low.lst_complement(omega) / (omega * q.service_low.mean());
    return a * b;
  }

  const double rho_star = rho_l / (1.0 - rho_h);
  const double high = busy_period_deficit(q.service_high, q.lambda_high, omega).value;
  const double completion = q.service_low.lst_complement(omega + q.lambda_high * high);
  const double a = (1.0 - rho_star) * omega / (omega - q.lambda_low * completion);
  if (q.discipline == Discipline::mixed_ge) {
    const double g_served = gf_.marginal_complement(i, high, completion);
    const double g_gate = gf_.marginal_complement(i, high, std::min(1.0, omega / q.lambda_low));
    return a * (g_gate - g_served) / (omega * (1.0 - rho_star) * mean_cycle);
  }
  // Exhaustive: low-priority customers see completion-time services and a
  // vacation made of the intervisit time plus clearing the high-priority backlog.
  const double vacation_mean = rates_.mean_intervisit[i] / (1.0 - rho_h);
  const double y = omega + q.lambda_high * high;
  return a * intervisit_complement(i, y) / (omega * vacation_mean);
}

double Analyzer::waiting_lst(std::size_t i, Priority c, double omega) const {
  const QueueSpec& q = queue(i);
  if (q.lambda(c) <= 0.0)
    throw UnsupportedEvaluation("waiting_lst: class " + std::string(to_string(c)) + " has no arrivals");
  require_domain(omega, max_waiting_omega(i, c), "waiting_lst");
  if (omega == 0.0) return 1.0;
  return waiting_value(i, c, omega);
}

double Analyzer::qlen_gf(std::size_t i, Priority c, double z) const {
  const QueueSpec& q = queue(i);
  if (!(z >= 0.0 && z <= 1.0)) throw UnsupportedEvaluation("qlen_gf: z must lie in [0, 1]");
  if (q.lambda(c) <= 0.0)
    throw UnsupportedEvaluation("qlen_gf: class " + std::string(to_string(c)) + " has no arrivals");
  const double s = q.lambda(c) * (1.0 - z);
  // Distributional Little's law over the sojourn time; for mixed low priority
  // the sojourn ends with the completion time.
  double service = q.service(c).lst(s);
  if (c == Priority::low && q.discipline == Discipline::mixed_ge) service = analytic::completion_time_lst(q, s);
  return waiting_lst(i, c, s) * service;
}

Transform Analyzer::cycle_transform(std::size_t i) const {
  const QueueSpec& q = queue(i);
  const double max = q.discipline == Discipline::mixed_ge ? q.lambda_low : q.total_rate();
  return Transform::from_complement([this, i](double w) { return cycle_complement(i, w); }, max);
}

Transform Analyzer::intervisit_transform(std::size_t i) const {
  const QueueSpec& q = queue(i);
  const double max = q.discipline == Discipline::mixed_ge ? q.lambda_high : q.total_rate();
  return Transform::from_complement([this, i](double w) { return intervisit_complement(i, w); }, max);
}

Transform Analyzer::visit_transform(std::size_t i) const {
  return Transform::from_complement([this, i](double w) {
    const auto [uh, ul] = visit_deficits(i, w);
    return gf_.marginal_complement(i, uh, ul);
  });
}

Transform Analyzer::joint_cycle_transform(std::size_t i) const {
  return Transform::from_complement([this, i](double w) { return gf_.marginal_complement(i, 0.0, 0.0, {w, w}); });
}

Transform Analyzer::joint_intervisit_transform(std::size_t i) const {
  return Transform::from_complement([this, i](double w) { return gf_.marginal_complement(i, 0.0, 0.0, {w, 0.0}); });
}

Transform Analyzer::joint_visit_transform(std::size_t i) const {
  return Transform::from_complement([this, i](double w) { return gf_.marginal_complement(i, 0.0, 0.0, {0.0, w}); });
}

Transform Analyzer::waiting_transform(std::size_t i, Priority c) const {
  return Transform::from_value([this, i, c](double w) { return waiting_lst(i, c, w); }, max_waiting_omega(i, c));
}

double Analyzer::moment_step(std::size_t i) const {
  // Scaled by the queue's total rate, not its smallest class rate: a nearly idle
  // class would force a step where cancellation dominates. Substitution domains
  // are enforced separately through Transform::max_omega.
  const double rate = std::min(1.0, queue(i).total_rate());
  return 1e-3 * rate / std::max(1.0, rates_.mean_cycle);
}

}  // namespace polling::analytic

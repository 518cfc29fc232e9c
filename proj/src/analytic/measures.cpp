#include "polling/analytic/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polling/errors.hpp"

namespace polling::analytic {

namespace {

constexpr double kVarianceTolerance = 5e-3;

MomentOptions step_options(const Analyzer& a, std::size_t i) {
  MomentOptions o;
  o.base_step = a.moment_step(i);
  return o;
}

double second_moment(const Transform& t, const Analyzer& a, std::size_t i) {
  return lst_moment(t, 2, step_options(a, i)).value;
}

// lambda E(B^2) / 2, i.e. rho E(B_res) without dividing by E(B).
double residual_work(double lambda, const Distribution& b) { return lambda * b.moment(2) / 2.0; }

// Delay-cycle mean for an exhaustively served high-priority class.
double delay_cycle_mean(const Analyzer& a, std::size_t i) {
  const QueueSpec& q = a.queue(i);
  const double rho_h = q.rho_high();
  const double rho_i = q.rho();
  const double mean_i = a.rates().mean_intervisit[i];
  const double second_i = second_moment(a.intervisit_transform(i), a, i);
  return (residual_work(q.lambda_high, q.service_high) + residual_work(q.lambda_low, q.service_low)) / (1.0 - rho_h) +
         (1.0 - rho_i) / (1.0 - rho_h) * second_i / (2.0 * mean_i);
}

}  // namespace

MomentEstimate cross_moment(const Analyzer& a, std::size_t i) {
  const QueueSpec& q = a.queue(i);
  if (q.discipline != Discipline::mixed_ge || q.lambda_high <= 0.0 || q.lambda_low <= 0.0)
    throw UnsupportedEvaluation("cross_moment needs a mixed_ge queue with both classes");
  const double mean_cycle = a.rates().mean_cycle;
  const double expected_count = q.lambda_high * a.rates().mean_intervisit[i] + q.lambda_low * mean_cycle;
  const double h0 = 1e-4 / std::max(1.0, expected_count);
  const GfEvaluator& gf = a.gf();
  // -(g(h,h) - g(h,0) - g(0,h)) / h^2 = E(X_H X_L) + O(h), g = 1 - V
  std::vector<double> estimates;
  for (int j = 0; j < 5; ++j) {
    const double h = std::ldexp(h0, j);
    const double both = gf.marginal_complement(i, h, h);
    const double only_high = gf.marginal_complement(i, h, 0.0);
    const double only_low = gf.marginal_complement(i, 0.0, h);
    estimates.push_back((only_high + only_low - both) / (h * h));
  }
  return richardson(estimates);
}

double mean_wait_high(const Analyzer& a, std::size_t i) {
  const QueueSpec& q = a.queue(i);
  if (q.lambda_high <= 0.0) throw UnsupportedEvaluation("mean_wait_high: no high-priority arrivals");
  if (q.discipline == Discipline::gated) {
    const double c2 = second_moment(a.cycle_transform(i), a, i);
    return (1.0 + q.rho_high()) * c2 / (2.0 * a.rates().mean_cycle);
  }
  return delay_cycle_mean(a, i);
}

LowWait mean_wait_low(const Analyzer& a, std::size_t i) {
  const QueueSpec& q = a.queue(i);
  if (q.lambda_low <= 0.0) throw UnsupportedEvaluation("mean_wait_low: no low-priority arrivals");
  const double rho_h = q.rho_high();
  const double rho_l = q.rho_low();
  const double mean_cycle = a.rates().mean_cycle;

  switch (q.discipline) {
    case Discipline::gated: {
      const double c2 = second_moment(a.cycle_transform(i), a, i);
      const double v = (1.0 + 2.0 * rho_h + rho_l) * c2 / (2.0 * mean_cycle);
      return {v, v};
    }
    case Discipline::exhaustive: {
      // M/G/1 with completion-time services plus residual of the extended vacation
      // Y = I + (busy periods of the high-priority customers found at the visit beginning).
      const double busy2 = q.service_high.moment(2) / std::pow(1.0 - rho_h, 3);
      const double completion2 =
          q.service_low.moment(2) / std::pow(1.0 - rho_h, 2) + q.lambda_high * q.service_low.mean() * busy2;
      const double rho_star = rho_l / (1.0 - rho_h);
      const double mean_i = a.rates().mean_intervisit[i];
      const double second_i = second_moment(a.intervisit_transform(i), a, i);
      const double mean_y = mean_i / (1.0 - rho_h);
      const double second_y = second_i / std::pow(1.0 - rho_h, 2) + q.lambda_high * mean_i * busy2;
      const double v = q.lambda_low * completion2 / (2.0 * (1.0 - rho_star)) + second_y / (2.0 * mean_y);
      return {v, v};
    }
    case Discipline::mixed_ge: break;
  }

  const double weight = 1.0 + rho_l / (1.0 - rho_h);
  const double c2 = second_moment(a.cycle_transform(i), a, i);
  LowWait out;
  out.value = weight * c2 / (2.0 * mean_cycle);
  if (q.lambda_high > 0.0) {
    const double cross = cross_moment(a, i).value;
    out.value += rho_h / (1.0 - rho_h) * cross / (q.lambda_low * q.lambda_high * mean_cycle);
  }

  const double c2_alt = second_moment(a.joint_cycle_transform(i), a, i);
  out.alt_value = weight * c2_alt / (2.0 * mean_cycle);
  if (q.lambda_high > 0.0) {
    const double v2 = second_moment(a.joint_visit_transform(i), a, i);
    const double i2 = second_moment(a.joint_intervisit_transform(i), a, i);
    const double vi = (c2_alt - v2 - i2) / 2.0;
    out.alt_value += rho_h / (1.0 - rho_h) * (i2 + vi) / mean_cycle;
  }
  return out;
}

double mean_wait(const Analyzer& a, std::size_t i, Priority c) {
  return c == Priority::high ? mean_wait_high(a, i) : mean_wait_low(a, i).value;
}

WaitMoments wait_moments(const Analyzer& a, std::size_t i, Priority c) {
  const Transform t = a.waiting_transform(i, c);
  const MomentOptions o = step_options(a, i);
  const MomentEstimate m1 = lst_moment(t, 1, o);
  const MomentEstimate m2 = lst_moment(t, 2, o);
  WaitMoments w;
  w.mean = m1.value;
  w.second_moment = m2.value;
  w.variance = m2.value - m1.value * m1.value;
  w.variance_error = m2.error + 2.0 * std::abs(m1.value) * m1.error;
  if (!(w.variance_error <= kVarianceTolerance * std::abs(w.variance)))
    throw IllConditioned("waiting-time variance error estimate exceeds 0.5% of its value");
  return w;
}

double leftover_work(const Analyzer& a, std::size_t i) {
  const QueueSpec& q = a.queue(i);
  const double mean_cycle = a.rates().mean_cycle;
  switch (q.discipline) {
    case Discipline::gated: return q.rho() * q.rho() * mean_cycle;
    case Discipline::exhaustive: return 0.0;
    case Discipline::mixed_ge: return q.rho_low() * q.rho() * mean_cycle;
  }
  return 0.0;
}

double pcl_rhs(const Analyzer& a) {
  const DerivedRates& r = a.rates();
  const double rho = r.rho_total;
  double work = 0.0, rho_sq = 0.0, leftover = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const QueueSpec& q = a.queue(i);
    work += residual_work(q.lambda_high, q.service_high) + residual_work(q.lambda_low, q.service_low);
    rho_sq += q.rho() * q.rho();
    leftover += leftover_work(a, i);
  }
  return rho / (1.0 - rho) * work + rho * r.switchover_second_moment / (2.0 * r.switchover_mean) +
         (rho * rho - rho_sq) * r.switchover_mean / (2.0 * (1.0 - rho)) + leftover;
}

PclResult pcl_check(const Analyzer& a, const PerfReport& report) {
  PclResult p;
  for (const ClassResult& c : report.classes) {
    const QueueSpec& q = a.queue(c.queue);
    p.lhs += q.lambda(c.cls) * q.service(c.cls).mean() * c.mean_wait;
  }
  p.rhs = pcl_rhs(a);
  p.residual = std::abs(p.lhs - p.rhs) / p.rhs;
  return p;
}

PclResult pcl_check(const Analyzer& a) {
  PerfReport r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const QueueSpec& q = a.queue(i);
    for (Priority c : {Priority::high, Priority::low}) {
      if (q.lambda(c) <= 0.0) continue;
      ClassResult cr;
      cr.queue = i;
      cr.cls = c;
      cr.discipline = q.discipline;
      cr.mean_wait = mean_wait(a, i, c);
      r.classes.push_back(cr);
    }
  }
  return pcl_check(a, r);
}

PerfReport analyze(const Analyzer& a) {
  PerfReport report;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const QueueSpec& q = a.queue(i);
    for (Priority c : {Priority::high, Priority::low}) {
      if (q.lambda(c) <= 0.0) continue;
      ClassResult cr;
      cr.queue = i;
      cr.cls = c;
      cr.discipline = q.discipline;
      cr.mean_wait = mean_wait(a, i, c);
      cr.var_wait = wait_moments(a, i, c).variance;
      cr.mean_qlen = q.lambda(c) * (cr.mean_wait + q.service(c).mean());
      report.classes.push_back(cr);
    }

    QueueMoments qm;
    const MomentOptions o = step_options(a, i);
    auto moments_of = [&](const Transform& t) {
      return PeriodMoments{lst_moment(t, 1, o).value, lst_moment(t, 2, o).value};
    };
    qm.cycle = moments_of(a.joint_cycle_transform(i));
    qm.intervisit = moments_of(a.joint_intervisit_transform(i));
    qm.visit = moments_of(a.joint_visit_transform(i));
    qm.cross_moment = std::numeric_limits<double>::quiet_NaN();
    if (q.discipline == Discipline::mixed_ge && q.lambda_high > 0.0 && q.lambda_low > 0.0)
      qm.cross_moment = cross_moment(a, i).value;
    qm.leftover_work = leftover_work(a, i);
    report.queues.push_back(qm);
  }
  report.pcl = pcl_check(a, report);
  return report;
}

PerfReport analyze(const PollingModel& model) { return analyze(Analyzer(model)); }

}  // namespace polling::analytic

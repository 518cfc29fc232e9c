#include "polling/analytic/gf_evaluator.hpp"

#include <cmath>
#include <string>

#include "polling/analytic/busy_period.hpp"
#include "polling/errors.hpp"

namespace polling::analytic {

GfEvaluator::GfEvaluator(PollingModel model, GfOptions options) : model_(std::move(model)), options_(options) {
  validate(model_);
}

// Replaces queue q's deficits by those of the populations that each customer
// present at the visit beginning turns into by the end of the visit.
void GfEvaluator::apply_visit(std::size_t q, std::vector<double>& u, double extra) const {
  const QueueSpec& spec = model_.queues[q];
  double others = extra;
  for (std::size_t j = 0; j < model_.size(); ++j) {
    if (j == q) continue;
    others += model_.queues[j].lambda_high * u[2 * j] + model_.queues[j].lambda_low * u[2 * j + 1];
  }
  double& uh = u[2 * q];
  double& ul = u[2 * q + 1];

  switch (spec.discipline) {
    case Discipline::gated: {
      const double x = spec.lambda_high * uh + spec.lambda_low * ul + others;
      uh = spec.service_high.lst_complement(x);
      ul = spec.service_low.lst_complement(x);
      break;
    }
    case Discipline::mixed_ge: {
      const double x = spec.lambda_low * ul + others;
      const double high = busy_period_deficit(spec.service_high, spec.lambda_high, x).value;
      uh = high;
      ul = spec.service_low.lst_complement(x + spec.lambda_high * high);
      break;
    }
    case Discipline::exhaustive: {
      const double low = completion_busy_period_deficit(spec, others).value;
      ul = low;
      uh = busy_period_deficit(spec.service_high, spec.lambda_high, spec.lambda_low * low + others).value;
      break;
    }
  }
}

double GfEvaluator::log_at_deficits(std::size_t i, std::span<const double> deficits, TimeWeights weights) const {
  const std::size_t n = model_.size();
  if (i >= n) throw UnsupportedEvaluation("queue index out of range");
  if (deficits.size() != 2 * n) throw UnsupportedEvaluation("argument vector must have length 2N");
  for (double d : deficits) {
    if (!(d >= 0.0 && d <= 1.0)) throw UnsupportedEvaluation("GF arguments must lie in [0, 1]");
  }
  if (weights.intervisit < 0.0 || weights.visit < 0.0) throw UnsupportedEvaluation("time weights must be >= 0");

  std::vector<double> u(deficits.begin(), deficits.end());
  double log_v = 0.0;
  std::size_t k = i;
  for (std::size_t cycle = 0; cycle < options_.max_cycles; ++cycle) {
    double increment = 0.0;
    bool all_zero = true;
    for (std::size_t step = 0; step < n; ++step) {
      k = (k + n - 1) % n;
      const double w_intervisit = cycle == 0 ? weights.intervisit : 0.0;
      double x = w_intervisit;
      for (std::size_t j = 0; j < n; ++j)
        x += model_.queues[j].lambda_high * u[2 * j] + model_.queues[j].lambda_low * u[2 * j + 1];
      if (x > 0.0) {
        // log1p on the complement keeps small deficits exact; the direct log keeps
        // tiny transforms from rounding to log(0).
        const Distribution& s = model_.switchovers[k];
        const double c = s.lst_complement(x);
        increment += c < 0.5 ? std::log1p(-c) : std::log(s.lst(x));
      }

      const double extra = cycle != 0 ? 0.0 : (k == i ? weights.visit : weights.intervisit);
      apply_visit(k, u, extra);
    }
    log_v += increment;
    for (double d : u) all_zero = all_zero && d == 0.0;
    if (cycle > 0 && (all_zero || increment == 0.0 || std::abs(increment) <= options_.relative_tolerance * std::abs(log_v)))
      return log_v;
  }
  throw NoConvergence("generating function did not converge within " + std::to_string(options_.max_cycles) +
                      " cycles");
}

double GfEvaluator::operator()(std::size_t i, std::span<const double> z) const {
  std::vector<double> u(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (!(z[k] >= 0.0 && z[k] <= 1.0)) throw UnsupportedEvaluation("GF arguments must lie in [0, 1]");
    u[k] = 1.0 - z[k];
  }
  return std::exp(log_at_deficits(i, u));
}

double GfEvaluator::marginal_log(std::size_t i, double deficit_high, double deficit_low, TimeWeights weights) const {
  std::vector<double> u(dimension(), 0.0);
  if (i >= model_.size()) throw UnsupportedEvaluation("queue index out of range");
  u[2 * i] = deficit_high;
  u[2 * i + 1] = deficit_low;
  return log_at_deficits(i, u, weights);
}

double GfEvaluator::marginal_complement(std::size_t i, double deficit_high, double deficit_low,
                                        TimeWeights weights) const {
  return -std::expm1(marginal_log(i, deficit_high, deficit_low, weights));
}

}  // namespace polling::analytic

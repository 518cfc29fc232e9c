#include "polling/analytic/moments.hpp"

#include <cmath>
#include <string>

#include "polling/errors.hpp"

namespace polling::analytic {

Transform Transform::from_value(Fn f, double max_omega) {
  return Transform([f = std::move(f)](double w) { return 1.0 - f(w); }, max_omega);
}

Transform Transform::from_complement(Fn one_minus_f, double max_omega) {
  return Transform(std::move(one_minus_f), max_omega);
}

MomentEstimate richardson(const std::vector<double>& estimates) {
  if (estimates.empty()) return {};
  // Column j removes the h^j error term; steps grow by 2, so the finest
  // estimate sits at index 0.
  std::vector<double> col = estimates;
  double previous = col[0];
  double increment = 0.0;
  for (std::size_t j = 1; j < estimates.size(); ++j) {
    const double factor = std::ldexp(1.0, static_cast<int>(j));
    std::vector<double> next(col.size() - 1);
    for (std::size_t m = 0; m + 1 < col.size(); ++m) next[m] = (factor * col[m] - col[m + 1]) / (factor - 1.0);
    previous = col[0];
    col = std::move(next);
    increment = std::abs(col[0] - previous);
  }
  return {col[0], increment};
}

MomentEstimate lst_moment(const Transform& f, int k, MomentOptions options) {
  if (k != 1 && k != 2) throw UnsupportedEvaluation("lst_moment supports k = 1 or 2");
  if (!(options.base_step > 0.0)) throw UnsupportedEvaluation("base step must be positive");
  const int points = options.levels + k;
  double h0 = options.base_step;
  const double widest = std::ldexp(h0, points - 1);
  if (widest > f.max_omega()) h0 *= f.max_omega() / widest;

  // q(h) = (1 - f(h)) / h = m1 - m2 h / 2 + O(h^2)
  std::vector<double> steps(points), q(points);
  for (int j = 0; j < points; ++j) {
    steps[j] = std::ldexp(h0, j);
    q[j] = f.complement(steps[j]) / steps[j];
  }

  std::vector<double> estimates;
  if (k == 1) {
    estimates = q;
  } else {
    // 2 (q(h) - q(2h)) / h = m2 + O(h)
    for (int j = 0; j + 1 < points; ++j) estimates.push_back(2.0 * (q[j] - q[j + 1]) / steps[j]);
  }
  MomentEstimate est = richardson(estimates);
  if (options.relative_tolerance > 0.0 && !(est.error <= options.relative_tolerance * std::abs(est.value))) {
    throw IllConditioned("moment " + std::to_string(k) + " error estimate " + std::to_string(est.error) +
                         " exceeds tolerance");
  }
  return est;
}

}  // namespace polling::analytic

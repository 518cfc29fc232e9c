#include "polling/analytic/busy_period.hpp"

namespace polling::analytic {

Deficit busy_period_deficit(const Distribution& service, double lambda, double omega) {
  auto g = [&service](double y) { return service_deficit(service, y); };
  return detail::solve_busy_deficit(g, lambda, omega);
}

double busy_period_lst(const Distribution& service, double lambda, double omega) {
  // Through the service LST: 1 - deficit underflows in the far tail.
  return service.lst(omega + lambda * busy_period_deficit(service, lambda, omega).value);
}

Deficit completion_deficit(const QueueSpec& q, double omega) {
  const Deficit high = busy_period_deficit(q.service_high, q.lambda_high, omega);
  const double y = omega + q.lambda_high * high.value;
  const Deficit low = service_deficit(q.service_low, y);
  return {low.value, low.slope * (1.0 + q.lambda_high * high.slope)};
}

double completion_time_lst(const QueueSpec& q, double omega) {
  const double high = busy_period_deficit(q.service_high, q.lambda_high, omega).value;
  return q.service_low.lst(omega + q.lambda_high * high);
}

Deficit completion_busy_period_deficit(const QueueSpec& q, double omega) {
  auto g = [&q](double y) { return completion_deficit(q, y); };
  return detail::solve_busy_deficit(g, q.lambda_low, omega);
}

}  // namespace polling::analytic

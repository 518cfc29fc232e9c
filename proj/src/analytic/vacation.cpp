#include "polling/analytic/vacation.hpp"

#include "polling/errors.hpp"

namespace polling::analytic {

double vacation_mean_wait_low(double rho_high, double rho_low, double vacation, VacationDiscipline d) {
  const double rho = rho_high + rho_low;
  if (rho_high < 0.0 || rho_low < 0.0) throw NonpositiveParameter("vacation model: loads must be >= 0");
  if (!(rho < 1.0)) throw UnstableSystem(rho);
  if (!(vacation > 0.0)) throw NonpositiveParameter("vacation model: S must be > 0");
  if (d == VacationDiscipline::gated)
    return (1.0 + rho + rho_high) * (vacation / (2.0 * (1.0 - rho)) + rho / (1.0 - rho * rho));
  return rho / ((1.0 - rho) * (1.0 - rho_high)) +
         vacation * (1.0 + rho * (1.0 - 2.0 * rho_high)) / (2.0 * (1.0 - rho) * (1.0 - rho_high));
}

std::optional<double> vacation_crossover(double rho, double vacation) {
  if (!(rho > 0.0 && rho < 1.0)) throw NonpositiveParameter("vacation_crossover: rho must lie in (0, 1)");
  if (!(vacation > 0.0)) throw NonpositiveParameter("vacation_crossover: S must be > 0");
  const double threshold = 2.0 * rho / (1.0 + rho);
  if (vacation <= threshold) return std::nullopt;
  return rho * (vacation - threshold) / (vacation + threshold);
}

}  // namespace polling::analytic

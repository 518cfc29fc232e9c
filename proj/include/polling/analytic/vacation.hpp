#pragma once

#include <optional>

namespace polling::analytic {

enum class VacationDiscipline { gated, mixed_ge };

/// Mean low-priority waiting time in a single M/G/1 queue with multiple
/// vacations of fixed length S and unit-mean exponential services.
double vacation_mean_wait_low(double rho_high, double rho_low, double vacation, VacationDiscipline d);

/// Arrival rate of the high class at which gated and mixed_ge give the same
/// low-priority mean wait (total rho fixed). Absent when S <= 2 rho / (1 + rho),
/// where gated is better for every positive high-priority rate.
std::optional<double> vacation_crossover(double rho, double vacation);

}  // namespace polling::analytic

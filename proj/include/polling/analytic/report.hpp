#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "polling/analytic/measures.hpp"
#include "polling/model.hpp"
#include "polling/sim/simulator.hpp"

namespace polling::analytic {

inline constexpr const char* kReportHeader =
    "queue,class,discipline,mean_wait,var_wait,mean_qlen,pcl_lhs,pcl_rhs,residual";

/// Number formatted with `digits` significant digits ("%.*g").
std::string format_number(double x, int digits = 6);
/// Number formatted with `decimals` fixed decimals.
std::string format_fixed(double x, int decimals = 3);

/// One row per class (queues numbered from 1) followed by a `system` row with
/// the conservation-law columns.
void write_csv(std::ostream& os, const PerfReport& report);

/// Human-readable table with 3 decimals, including per-queue period moments.
void write_table(std::ostream& os, const PerfReport& report);

/// Simulation results in the report schema plus ci_halfwidth (of mean_wait)
/// and n_samples. The system row carries the conservation-law left-hand side
/// computed from the simulated means; rhs and residual are filled when
/// `pcl_rhs` is given.
void write_sim_csv(std::ostream& os, const PollingModel& model, const sim::SimStats& stats,
                   std::optional<double> pcl_rhs = std::nullopt);

void write_sim_table(std::ostream& os, const PollingModel& model, const sim::SimStats& stats);

/// sum over classes of rho_ic E(W_ic) from simulated means.
double simulated_pcl_lhs(const PollingModel& model, const sim::SimStats& stats);

}  // namespace polling::analytic

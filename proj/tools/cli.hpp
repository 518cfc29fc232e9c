#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "polling/analytic/analyzer.hpp"
#include "polling/analytic/measures.hpp"
#include "polling/model.hpp"

namespace polling::cli {

enum ExitCode : int { ok = 0, io_error = 1, unstable = 2, convergence = 3, check_failed = 4 };

enum class Format { csv, table };

/// Residual above which `check` fails.
inline constexpr double kCheckTolerance = 1e-5;

struct SweepSpec {
  Priority cls = Priority::high;
  std::size_t queue = 0;  // zero-based
  std::vector<double> grid;
  bool hold_total = false;
};

/// Parses "lambda_high:Q1:0:0.6:50" (parameter, queue, first, last, points).
SweepSpec parse_sweep(const std::string& text, bool hold_total);

/// Model with the swept rate set to `value`; with hold_total the other class
/// of that queue absorbs the change so the queue's total rate stays fixed.
PollingModel apply_sweep_point(const PollingModel& model, const SweepSpec& spec, double value);

/// Queues varied by `compare` when none are given: those with both classes,
/// or every queue when no queue has both.
std::vector<std::size_t> default_compare_queues(const PollingModel& model);

/// Writes the conservation-law check for `report` and returns its exit code.
int write_check(std::ostream& os, const analytic::Analyzer& a, const analytic::PerfReport& report, Format format);

/// Entry point. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polling::cli

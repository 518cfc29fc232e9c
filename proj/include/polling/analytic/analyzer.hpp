#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "polling/analytic/gf_evaluator.hpp"
#include "polling/analytic/moments.hpp"
#include "polling/model.hpp"

namespace polling::analytic {

struct AnalyzerOptions {
  GfOptions gf;
};

/// Transform-level view of a validated polling model.
///
/// Cycle, intervisit and waiting-time transforms are obtained by substituting
/// into the visit-beginning GF, and therefore carry the domain restrictions of
/// those substitutions (UnsupportedEvaluation outside them). The
/// `joint_visit_intervisit_lst` route attaches Laplace weights directly to the
/// periods preceding a visit beginning and is defined for every omega >= 0
/// and every discipline.
class Analyzer {
 public:
  explicit Analyzer(PollingModel model, AnalyzerOptions options = {});

  const PollingModel& model() const noexcept { return gf_.model(); }
  const DerivedRates& rates() const noexcept { return rates_; }
  const GfEvaluator& gf() const noexcept { return gf_; }
  std::size_t size() const noexcept { return gf_.model().size(); }
  const QueueSpec& queue(std::size_t i) const;

  double completion_time_lst(std::size_t i, double omega) const;
  double gf_visit_beginning(std::size_t i, std::span<const double> z) const;

  /// gamma_i(omega): cycle time measured between visit beginnings of queue i.
  double cycle_time_lst(std::size_t i, double omega) const;
  double intervisit_lst(std::size_t i, double omega) const;
  double visit_time_lst(std::size_t i, double omega) const;
  /// E[exp(-visit_omega V_i - intervisit_omega I_i)] for a visit V_i followed by its intervisit I_i.
  double joint_visit_intervisit_lst(std::size_t i, double visit_omega, double intervisit_omega) const;

  double waiting_lst(std::size_t i, Priority c, double omega) const;
  double waiting_lst_high(std::size_t i, double omega) const { return waiting_lst(i, Priority::high, omega); }
  double waiting_lst_low(std::size_t i, double omega) const { return waiting_lst(i, Priority::low, omega); }

  /// E[z^N] for the number of class-c customers at queue i.
  double qlen_gf(std::size_t i, Priority c, double z) const;
  double qlen_gf_high(std::size_t i, double z) const { return qlen_gf(i, Priority::high, z); }
  double qlen_gf_low(std::size_t i, double z) const { return qlen_gf(i, Priority::low, z); }

  Transform cycle_transform(std::size_t i) const;
  Transform intervisit_transform(std::size_t i) const;
  Transform visit_transform(std::size_t i) const;
  Transform joint_cycle_transform(std::size_t i) const;
  Transform joint_intervisit_transform(std::size_t i) const;
  Transform joint_visit_transform(std::size_t i) const;
  Transform waiting_transform(std::size_t i, Priority c) const;

  /// Base differentiation step h0 = 1e-3 min(lambda_iH + lambda_iL, 1) / max(1, E(C)).
  double moment_step(std::size_t i) const;

  /// Queue-i deficits (1 - z_iH, 1 - z_iL) whose substitution into V_b_i
  /// yields the LST of the visit time at omega.
  std::pair<double, double> visit_deficits(std::size_t i, double omega) const;

 private:
  double cycle_complement(std::size_t i, double omega) const;
  double intervisit_complement(std::size_t i, double omega) const;
  double waiting_value(std::size_t i, Priority c, double omega) const;
  double max_waiting_omega(std::size_t i, Priority c) const;

  GfEvaluator gf_;
  DerivedRates rates_;
};

}  // namespace polling::analytic

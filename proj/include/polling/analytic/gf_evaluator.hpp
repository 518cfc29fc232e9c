#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polling/model.hpp"

namespace polling::analytic {

struct GfOptions {
  /// Stop once a full cycle changes log V by at most this fraction of |log V|.
  double relative_tolerance = 1e-16;
  std::size_t max_cycles = 100'000;
};

/// Extra Laplace weights attached to the period preceding the evaluated visit
/// beginning: `intervisit` applies from the previous visit completion of the
/// queue, `visit` to the previous visit itself.
struct TimeWeights {
  double intervisit = 0.0;
  double visit = 0.0;
};

/// Joint queue-length generating function at visit beginnings.
///
/// Each two-class queue is split into a high-priority and a low-priority
/// virtual queue; every visit then acts on the GF by a branching substitution
/// (busy periods for exhaustively served classes, completion times or plain
/// services for gated ones), and each switch-over contributes a factor
/// sigma(sum lambda (1 - z)). Iterating these substitutions backwards from the
/// constant-1 function evaluates the infinite product that represents V_b.
///
/// Arguments are passed as deficits u = 1 - z, ordered (1H, 1L, 2H, 2L, ...),
/// which keeps 1 - V accurate for z close to 1.
class GfEvaluator {
 public:
  explicit GfEvaluator(PollingModel model, GfOptions options = {});

  const PollingModel& model() const noexcept { return model_; }
  std::size_t dimension() const noexcept { return 2 * model_.size(); }

  /// log V_b_i at deficits u; with nonzero weights this is
  /// log E[z^X exp(-a V_i - b I_i)] for the cycle ending at the visit beginning.
  double log_at_deficits(std::size_t i, std::span<const double> deficits, TimeWeights weights = {}) const;

  /// V_b_i(z) for z in [0,1]^{2N}.
  double operator()(std::size_t i, std::span<const double> z) const;

  /// log of V_b_i with all arguments 1 except those of queue i itself.
  double marginal_log(std::size_t i, double deficit_high, double deficit_low, TimeWeights weights = {}) const;

  /// 1 - V_b_i restricted to queue i's own arguments, accurate near the origin.
  double marginal_complement(std::size_t i, double deficit_high, double deficit_low,
                             TimeWeights weights = {}) const;

 private:
  void apply_visit(std::size_t q, std::vector<double>& u, double extra) const;

  PollingModel model_;
  GfOptions options_;
};

}  // namespace polling::analytic

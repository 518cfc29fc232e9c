#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polling/rng.hpp"

namespace polling {

enum class Family { deterministic, exponential, erlang, hyperexponential, uniform };

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);

/// Nonnegative random variable with a closed-form Laplace-Stieltjes transform.
///
/// Instances are validated at construction and immutable afterwards. Besides
/// the LST itself, `lst_complement` returns 1 - lst(omega) evaluated without
/// cancellation, which keeps small-omega differences accurate for the
/// numerical differentiation done downstream.
class Distribution {
 public:
  /// Point mass at zero.
  Distribution();

  static Distribution deterministic(double value);
  static Distribution exponential(double mean);
  static Distribution erlang(int phases, double mean);
  static Distribution hyperexponential(std::vector<double> probs, std::vector<double> rates);
  static Distribution uniform(double low, double high);

  Family family() const noexcept { return family_; }
  const std::vector<double>& params() const noexcept { return params_; }
  /// Branch probabilities; only populated for hyperexponential.
  const std::vector<double>& weights() const noexcept { return weights_; }

  double lst(double omega) const;
  double lst_complement(double omega) const;
  /// d/domega of lst_complement, i.e. E[B exp(-omega B)].
  double lst_complement_slope(double omega) const;

  /// Raw moment E[B^k], k in {1, 2, 3}.
  double moment(int k) const;
  double mean() const { return moment(1); }

  double sample(RngStream& rng) const;

  std::string describe() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(Family f, std::vector<double> params, std::vector<double> weights);

  Family family_;
  // deterministic: {value}; exponential: {mean}; erlang: {phases, mean};
  // hyperexponential: rates; uniform: {low, high}
  std::vector<double> params_;
  std::vector<double> weights_;
};

}  // namespace polling

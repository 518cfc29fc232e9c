#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace polling::analytic {

/// Handle on an LST f evaluable on [0, max_omega].
///
/// Internally the handle stores 1 - f(omega); transforms that can produce this
/// complement without cancellation should use `from_complement`.
class Transform {
 public:
  using Fn = std::function<double(double)>;

  static Transform from_value(Fn f, double max_omega = std::numeric_limits<double>::infinity());
  static Transform from_complement(Fn one_minus_f, double max_omega = std::numeric_limits<double>::infinity());

  double operator()(double omega) const { return 1.0 - complement_(omega); }
  double complement(double omega) const { return complement_(omega); }
  double max_omega() const noexcept { return max_omega_; }

 private:
  Transform(Fn complement, double max_omega) : complement_(std::move(complement)), max_omega_(max_omega) {}

  Fn complement_;
  double max_omega_;
};

struct MomentEstimate {
  double value = 0.0;
  double error = 0.0;  // magnitude of the last extrapolation increment
};

struct MomentOptions {
  double base_step = 1e-4;
  /// Relative error above which IllConditioned is raised; <= 0 disables the check.
  double relative_tolerance = 0.0;
  int levels = 4;
};

/// Raw moment (-1)^k f^(k)(0), k in {1, 2}, from one-sided differences at
/// steps h0 * 2^j with Richardson extrapolation over the step sequence.
MomentEstimate lst_moment(const Transform& f, int k, MomentOptions options = {});

/// Neville-style Richardson tableau for estimates A(h0 2^j) whose error is a
/// power series in h. Returns the extrapolated value and the last increment.
MomentEstimate richardson(const std::vector<double>& estimates);

}  // namespace polling::analytic

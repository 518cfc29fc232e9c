#include "polling/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "polling/errors.hpp"

namespace polling {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw NonpositiveParameter(what);
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// Raw moment E[U^k] of a uniform variable on [a, b].
double uniform_moment(double a, double b, int k) {
  if (b == a) return std::pow(a, k);
  return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
}

// Below this value of omega*high the uniform transforms switch to a Taylor series.
constexpr double kUniformSeriesCutoff = 1e-2;
constexpr int kUniformSeriesTerms = 9;

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::deterministic: return "deterministic";
    case Family::exponential: return "exponential";
    case Family::erlang: return "erlang";
    case Family::hyperexponential: return "hyperexponential";
    case Family::uniform: return "uniform";
  }
  return "?";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::deterministic, Family::exponential, Family::erlang, Family::hyperexponential,
                   Family::uniform}) {
    if (to_string(f) == name) return f;
  }
  throw SchemaError("unknown distribution family '" + std::string(name) + "'");
}

Distribution::Distribution() : Distribution(Family::deterministic, {0.0}, {}) {}

Distribution::Distribution(Family f, std::vector<double> params, std::vector<double> weights)
    : family_(f), params_(std::move(params)), weights_(std::move(weights)) {}

Distribution Distribution::deterministic(double value) {
  require(std::isfinite(value) && value >= 0.0, "deterministic value must be >= 0");
  return Distribution(Family::deterministic, {value}, {});
}

Distribution Distribution::exponential(double mean) {
  require(std::isfinite(mean) && mean > 0.0, "exponential mean must be > 0");
  return Distribution(Family::exponential, {mean}, {});
}

Distribution Distribution::erlang(int phases, double mean) {
  require(phases >= 1, "erlang phases must be >= 1");
  require(std::isfinite(mean) && mean > 0.0, "erlang mean must be > 0");
  return Distribution(Family::erlang, {static_cast<double>(phases), mean}, {});
}

Distribution Distribution::hyperexponential(std::vector<double> probs, std::vector<double> rates) {
  require(!probs.empty() && probs.size() == rates.size(), "hyperexponential needs matching probs and rates");
  for (double p : probs) require(std::isfinite(p) && p >= 0.0, "hyperexponential probabilities must be >= 0");
  for (double r : rates) require(std::isfinite(r) && r > 0.0, "hyperexponential rates must be > 0");
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-12, "hyperexponential probabilities must sum to 1");
  return Distribution(Family::hyperexponential, std::move(rates), std::move(probs));
}

Distribution Distribution::uniform(double low, double high) {
  require(std::isfinite(low) && low >= 0.0, "uniform low must be >= 0");
  require(std::isfinite(high) && high > low, "uniform high must exceed low");
  return Distribution(Family::uniform, {low, high}, {});
}

double Distribution::lst(double omega) const {
  if (omega == 0.0) return 1.0;
  switch (family_) {
    case Family::deterministic: return std::exp(-omega * params_[0]);
    case Family::exponential: return 1.0 / (1.0 + omega * params_[0]);
    case Family::erlang: {
      const double k = params_[0];
      return std::exp(-k * std::log1p(omega * params_[1] / k));
    }
    case Family::hyperexponential: {
      double v = 0.0;
      for (std::size_t j = 0; j < params_.size(); ++j) v += weights_[j] * params_[j] / (params_[j] + omega);
      return v;
    }
    case Family::uniform: return 1.0 - lst_complement(omega);
  }
  return 1.0;
}

double Distribution::lst_complement(double omega) const {
  if (omega == 0.0) return 0.0;
  switch (family_) {
    case Family::deterministic: return -std::expm1(-omega * params_[0]);
    case Family::exponential: {
      const double x = omega * params_[0];
      return x / (1.0 + x);
    }
    case Family::erlang: {
      const double k = params_[0];
      return -std::expm1(-k * std::log1p(omega * params_[1] / k));
    }
    case Family::hyperexponential: {
      double v = 0.0;
      for (std::size_t j = 0; j < params_.size(); ++j) v += weights_[j] * omega / (params_[j] + omega);
      return v;
    }
    case Family::uniform: {
      const double a = params_[0], b = params_[1];
      if (omega * b < kUniformSeriesCutoff) {
        double v = 0.0, pw = 1.0;
        for (int k = 1; k <= kUniformSeriesTerms; ++k) {
          pw *= omega;
          const double term = pw * uniform_moment(a, b, k) / factorial(k);
          v += (k % 2 == 1) ? term : -term;
        }
        return v;
      }
      // 1 - (e^{-wa} - e^{-wb}) / (w (b - a))
      const double diff = -std::exp(-omega * a) * std::expm1(-omega * (b - a));
      return 1.0 - diff / (omega * (b - a));
    }
  }
  return 0.0;
}

double Distribution::lst_complement_slope(double omega) const {
  switch (family_) {
    case Family::deterministic: return params_[0] * std::exp(-omega * params_[0]);
    case Family::exponential: {
      const double d = 1.0 + omega * params_[0];
      return params_[0] / (d * d);
    }
    case Family::erlang: {
      const double k = params_[0], m = params_[1];
      return m * std::exp(-(k + 1.0) * std::log1p(omega * m / k));
    }
    case Family::hyperexponential: {
      double v = 0.0;
      for (std::size_t j = 0; j < params_.size(); ++j) {
        const double d = params_[j] + omega;
        v += weights_[j] * params_[j] / (d * d);
      }
      return v;
    }
    case Family::uniform: {
      const double a = params_[0], b = params_[1];
      if (omega * b < kUniformSeriesCutoff) {
        double v = 0.0, pw = 1.0;
        for (int k = 0; k < kUniformSeriesTerms; ++k) {
          const double term = pw * uniform_moment(a, b, k + 1) / factorial(k);
          v += (k % 2 == 0) ? term : -term;
          pw *= omega;
        }
        return v;
      }
      // (1/(b-a)) * integral_a^b x e^{-wx} dx
      auto antiderivative = [omega](double x) { return -std::exp(-omega * x) * (x / omega + 1.0 / (omega * omega)); };
      return (antiderivative(b) - antiderivative(a)) / (b - a);
    }
  }
  return 0.0;
}

double Distribution::moment(int k) const {
  if (k < 1 || k > 3) throw NonpositiveParameter("moment order must be 1, 2 or 3");
  switch (family_) {
    case Family::deterministic: return std::pow(params_[0], k);
    case Family::exponential: return factorial(k) * std::pow(params_[0], k);
    case Family::erlang: {
      const double n = params_[0], m = params_[1];
      double v = std::pow(m / n, k);
      for (int j = 0; j < k; ++j) v *= (n + j);
      return v;
    }
    case Family::hyperexponential: {
      double v = 0.0;
      for (std::size_t j = 0; j < params_.size(); ++j) v += weights_[j] * factorial(k) / std::pow(params_[j], k);
      return v;
    }
    case Family::uniform: return uniform_moment(params_[0], params_[1], k);
  }
  return 0.0;
}

double Distribution::sample(RngStream& rng) const {
  switch (family_) {
    case Family::deterministic: return params_[0];
    case Family::exponential: return rng.exponential(params_[0]);
    case Family::erlang: {
      const int n = static_cast<int>(params_[0]);
      const double phase_mean = params_[1] / n;
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += rng.exponential(phase_mean);
      return v;
    }
    case Family::hyperexponential: {
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t branch = params_.size() - 1;
      for (std::size_t j = 0; j < params_.size(); ++j) {
        acc += weights_[j];
        if (u < acc) {
          branch = j;
          break;
        }
      }
      return rng.exponential(1.0 / params_[branch]);
    }
    case Family::uniform: return params_[0] + (params_[1] - params_[0]) * rng.uniform();
  }
  return 0.0;
}

std::string Distribution::describe() const {
  char buf[128];
  switch (family_) {
    case Family::deterministic: std::snprintf(buf, sizeof buf, "deterministic(%g)", params_[0]); break;
    case Family::exponential: std::snprintf(buf, sizeof buf, "exponential(mean=%g)", params_[0]); break;
    case Family::erlang: std::snprintf(buf, sizeof buf, "erlang(k=%g, mean=%g)", params_[0], params_[1]); break;
    case Family::hyperexponential:
      std::snprintf(buf, sizeof buf, "hyperexponential(%zu branches, mean=%g)", params_.size(), moment(1));
      break;
    case Family::uniform: std::snprintf(buf, sizeof buf, "uniform(%g, %g)", params_[0], params_[1]); break;
  }
  return buf;
}

}  // namespace polling

#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "pacrehab/error.hpp"
#include "pacrehab/model/samples.hpp"

namespace pacrehab {

struct ExpParams {
  double lambda_rate = 1.0;

  void validate() const {
    if (!(lambda_rate > 0.0) || !std::isfinite(lambda_rate))
      throw Error(ErrorCode::InvalidArgument, "exponential rate must be positive");
  }

  double log_pdf(double x) const {
    if (x < 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(lambda_rate) - lambda_rate * x;
  }
  double pdf(double x) const { return std::exp(log_pdf(x)); }
  double entropy() const { return 1.0 - std::log(lambda_rate); }

  friend bool operator==(const ExpParams&, const ExpParams&) = default;
};

/// Closed-form MLE of a zero-origin exponential: rate = 1 / mean.
inline ExpParams fit_exp(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::InsufficientSamples, "exponential fit needs samples");
  const WeightedSample w(samples);
  if (w.min() < 0.0) throw Error(ErrorCode::InvalidArgument, "exponential samples must be >= 0");
  const double mean = w.mean([](double x) { return x; });
  if (mean == 0.0) throw Error(ErrorCode::AllZeroSamples, "all samples are zero");
  return {1.0 / mean};
}

}  // namespace pacrehab

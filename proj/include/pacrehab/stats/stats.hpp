#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "pacrehab/error.hpp"

namespace pacrehab::stats {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return kNaN;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator); NaN below two values.
inline double sd(std::span<const double> xs) {
  if (xs.size() < 2) return kNaN;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Ordinary least squares fit of y on x together with Pearson's r.
struct Regression {
  std::size_t n = 0;
  double r = kNaN;
  double slope = kNaN;
  double intercept = kNaN;
  /// Standard error of the slope.
  double slope_stderr = kNaN;
  /// Empty when every figure is defined.
  std::string warning;
};

inline Regression regress(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "regression inputs differ in length");
  Regression out;
  out.n = x.size();
  if (out.n < 2) {
    out.warning = "fewer than two points";
    return out;
  }
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < out.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    out.warning = "zero variance in x; correlation undefined";
    return out;
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (out.n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < out.n; ++i) {
      const double e = y[i] - (out.intercept + out.slope * x[i]);
      sse += e * e;
    }
    out.slope_stderr = std::sqrt(sse / static_cast<double>(out.n - 2) / sxx);
  }
  if (syy == 0.0) {
    out.warning = "zero variance in y; correlation undefined";
    return out;
  }
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) { return regress(x, y).r; }

}  // namespace pacrehab::stats

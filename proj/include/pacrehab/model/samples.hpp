#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pacrehab/error.hpp"

namespace pacrehab {

/// Sorted distinct values with multiplicities. Every sum over a sample goes
/// through this form, so results do not depend on sample order and are
/// unchanged (bit for bit) when every sample is repeated 2^j times.
class WeightedSample {
 public:
  WeightedSample() = default;
  explicit WeightedSample(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    for (double x : sorted)
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "sample contains a non-finite value");
    std::sort(sorted.begin(), sorted.end());
    for (double x : sorted) {
      if (!values_.empty() && values_.back() == x) {
        counts_.back() += 1.0;
      } else {
        values_.push_back(x);
        counts_.push_back(1.0);
      }
    }
    size_ = static_cast<double>(sorted.size());
  }

  bool empty() const { return values_.empty(); }
  double size() const { return size_; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& counts() const { return counts_; }

  /// sum of count * f(value), in ascending value order.
  template <class F>
  double sum(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += counts_[i] * f(values_[i]);
    return s;
  }

  template <class F>
  double mean(F&& f) const {
    return sum(std::forward<F>(f)) / size_;
  }

 private:
  std::vector<double> values_;
  std::vector<double> counts_;
  double size_ = 0.0;
};

}  // namespace pacrehab

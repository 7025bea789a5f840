#pragma once

#include <cmath>
#include <limits>
#include <span>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "pacrehab/error.hpp"
#include "pacrehab/model/samples.hpp"

namespace pacrehab {

/// Three-parameter (shifted) Gamma distribution; density is zero below mu.
struct GammaParams {
  double k = 1.0;
  double mu = 0.0;
  double gamma_scale = 1.0;

  void validate() const {
    if (!(k > 0.0) || !(gamma_scale > 0.0) || !std::isfinite(k + mu + gamma_scale))
      throw Error(ErrorCode::InvalidArgument, "gamma parameters require k > 0 and scale > 0");
  }

  double log_pdf(double x) const {
    const double y = x - mu;
    if (y < 0.0) return -std::numeric_limits<double>::infinity();
    if (y == 0.0) {
      if (k < 1.0) return std::numeric_limits<double>::infinity();
      if (k > 1.0) return -std::numeric_limits<double>::infinity();
      return -std::log(gamma_scale);
    }
    return (k - 1.0) * std::log(y) - y / gamma_scale - std::lgamma(k) - k * std::log(gamma_scale);
  }

  double pdf(double x) const { return std::exp(log_pdf(x)); }
  double mean() const { return mu + k * gamma_scale; }
  double variance() const { return k * gamma_scale * gamma_scale; }

  friend bool operator==(const GammaParams&, const GammaParams&) = default;

  /// Differential entropy in nats.
  double entropy() const {
    return k + std::log(gamma_scale) + std::lgamma(k) + (1.0 - k) * boost::math::digamma(k);
  }
};

struct GammaFit {
  GammaParams params;
  double log_likelihood = 0.0;
  int outer_iterations = 0;
  /// Set when the location could not be estimated and a fixed location was used.
  bool location_fallback = false;
};

struct GammaFitOptions {
  std::size_t min_samples = 30;
  int max_outer_iterations = 200;
  double ll_tolerance = 1e-10;
  /// Smallest allowed gap between the location and the sample minimum.
  double min_gap = 1e-6;
};

namespace detail {

/// Solves log k - digamma(k) = s for k (s > 0) by Newton's method from
/// Minka's closed-form starting point.
inline double solve_gamma_shape(double s) {
  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int i = 0; i < 100; ++i) {
    const double f = std::log(k) - boost::math::digamma(k) - s;
    const double df = 1.0 / k - boost::math::trigamma(k);
    double next = k - f / df;
    if (!(next > 0.0)) next = k / 2.0;
    if (std::abs(next - k) <= 1e-14 * k) return next;
    k = next;
  }
  return k;
}

/// Two-parameter MLE at a fixed location, with the profile log-likelihood
/// and its derivative with respect to the location.
struct ProfilePoint {
  double k;
  double scale;
  double ll;
  double dll_dmu;
};

inline ProfilePoint profile_at(const WeightedSample& w, double mu) {
  const double n = w.size();
  const double mean_y = w.mean([mu](double x) { return x - mu; });
  const double mean_log = w.mean([mu](double x) { return std::log(x - mu); });
  const double s = std::log(mean_y) - mean_log;
  if (!(s > 0.0)) throw Error(ErrorCode::DegenerateSample, "sample has no spread at this location");
  const double k = solve_gamma_shape(s);
  const double scale = mean_y / k;
  const double ll = n * ((k - 1.0) * mean_log - k - std::lgamma(k) - k * std::log(scale));
  const double inv_sum = w.sum([mu](double x) { return 1.0 / (x - mu); });
  return {k, scale, ll, n / scale - (k - 1.0) * inv_sum};
}

}  // namespace detail

/// Maximum-likelihood fit of the three-parameter Gamma.
///
/// The location is profiled out: for each candidate location the shape
/// comes from Newton's method on the digamma equation and the scale in
/// closed form. The location itself is found by a bracketed root search on
/// the profile derivative, written in t = log(min(x) - mu), until successive
/// log-likelihoods differ by less than the tolerance. If the profile has no
/// interior maximum (it keeps rising towards min(x) or towards -infinity) the
/// location is fixed instead: at 0 when all samples are positive, otherwise
/// half a unit below the smallest sample.
inline GammaFit fit_gamma_report(std::span<const double> samples, const GammaFitOptions& opt = {}) {
  if (samples.size() < opt.min_samples)
    throw Error(ErrorCode::InsufficientSamples,
                "gamma fit needs at least " + std::to_string(opt.min_samples) + " samples");
  const WeightedSample w(samples);
  if (w.values().size() < 2) throw Error(ErrorCode::DegenerateSample, "all samples are equal");

  const double lo = w.min();
  const double spread = w.max() - w.min();
  const auto mu_of = [lo](double t) { return lo - std::exp(t); };
  // d ll / d t = d ll / d mu * d mu / d t = -exp(t) * d ll / d mu
  const auto slope = [&](double t, const detail::ProfilePoint& p) { return -std::exp(t) * p.dll_dmu; };

  const auto fallback = [&] {
    const double mu = lo > 0.0 ? 0.0 : lo - 0.5;
    const auto p = detail::profile_at(w, mu);
    return GammaFit{{p.k, mu, p.scale}, p.ll, 0, true};
  };

  double t_lo = std::log(opt.min_gap);
  auto p_lo = detail::profile_at(w, mu_of(t_lo));
  if (!(slope(t_lo, p_lo) > 0.0)) return fallback();

  const double t_limit = std::log(1e4 * (spread + 1.0));
  double t_hi = std::log(spread + 1.0);
  auto p_hi = detail::profile_at(w, mu_of(t_hi));
  while (slope(t_hi, p_hi) > 0.0) {
    t_lo = t_hi;
    p_lo = p_hi;
    t_hi += 1.0;
    if (t_hi > t_limit) return fallback();
    p_hi = detail::profile_at(w, mu_of(t_hi));
  }

  // Illinois variant of regula falsi on the slope.
  double g_lo = slope(t_lo, p_lo);
  double g_hi = slope(t_hi, p_hi);
  double prev_ll = std::max(p_lo.ll, p_hi.ll);
  int side = 0;
  for (int it = 1; it <= opt.max_outer_iterations; ++it) {
    double t = (t_lo * g_hi - t_hi * g_lo) / (g_hi - g_lo);
    if (!(t > t_lo && t < t_hi)) t = 0.5 * (t_lo + t_hi);
    const auto p = detail::profile_at(w, mu_of(t));
    const double g = slope(t, p);
    const bool converged = std::abs(p.ll - prev_ll) < opt.ll_tolerance || g == 0.0 ||
                           (t_hi - t_lo) < 1e-13 * std::max(1.0, std::abs(t));
    if (converged) return GammaFit{{p.k, mu_of(t), p.scale}, p.ll, it, false};
    prev_ll = p.ll;
    if (g > 0.0) {
      t_lo = t;
      g_lo = g;
      if (side == -1) g_hi /= 2.0;
      side = -1;
    } else {
      t_hi = t;
      g_hi = g;
      if (side == 1) g_lo /= 2.0;
      side = 1;
    }
  }
  throw Error(ErrorCode::NonConvergence, "gamma location search did not converge");
}

inline GammaParams fit_gamma(std::span<const double> samples, const GammaFitOptions& opt = {}) {
  return fit_gamma_report(samples, opt).params;
}

/// Log-likelihood of a sample under given parameters (no flooring).
inline double gamma_log_likelihood(std::span<const double> samples, const GammaParams& p) {
  return WeightedSample(samples).sum([&p](double x) { return p.log_pdf(x); });
}

}  // namespace pacrehab

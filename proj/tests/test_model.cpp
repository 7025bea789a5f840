#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pacrehab/model/reference.hpp"
#include "pacrehab/rng.hpp"
#include "support/oracles.hpp"

using namespace pacrehab;

namespace {

std::vector<double> gamma_draws(std::uint64_t seed, int n, double k, double mu, double scale) {
  Rng r(seed);
  std::vector<double> xs(n);
  for (double& x : xs) x = mu + r.gamma(k, scale);
  return xs;
}

std::vector<double> exp_draws(std::uint64_t seed, int n, double rate) {
  Rng r(seed);
  std::vector<double> xs(n);
  for (double& x : xs) x = r.exponential(rate);
  return xs;
}

// Tanh-sinh copes with the endpoint cusp of shapes just above 1. It works in
// offsets from a so abscissae next to the endpoint stay distinct from it.
template <class F>
double integrate(F&& f, double a, double b) {
  return boost::math::quadrature::tanh_sinh<double>().integrate([&](double y) { return f(a + y); }, 0.0, b - a, 1e-12);
}

// Independent log-density: direct formula with tgamma.
double gamma_pdf_oracle(double x, double k, double mu, double scale) {
  if (x < mu) return 0.0;
  const double y = (x - mu) / scale;
  return std::pow(y, k - 1.0) * std::exp(-y) / (std::tgamma(k) * scale);
}

FeatureSeries series(std::uint64_t seed) {
  FeatureSeries f;
  f.iki = gamma_draws(seed, 80, 2.0, 3.0, 10.0);
  f.ptt = exp_draws(seed + 1, 40, 0.3);
  for (double& x : f.iki) x = std::round(x);
  for (double& x : f.ptt) x = std::round(x);
  return f;
}

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Gamma, PdfIntegratesToOne) {
  for (auto [k, mu, scale] : {std::tuple{2.19, -2.06, 17.11}, {1.0, 0.0, 3.0}, {5.5, 10.0, 0.7}, {1.3, 4.0, 40.0}}) {
    const GammaParams p{k, mu, scale};
    const double area = integrate([&](double x) { return p.pdf(x); }, mu, mu + 60 * scale);
    EXPECT_NEAR(area, 1.0, 1e-6) << k;
    for (double x : {mu + 0.1 * scale, mu + scale, mu + 7 * scale})
      EXPECT_NEAR(p.pdf(x), gamma_pdf_oracle(x, k, mu, scale), 1e-12 * std::max(1.0, p.pdf(x)));
  }
}

TEST(Gamma, EntropyMatchesQuadrature) {
  for (auto [k, scale] : {std::pair{2.19, 17.11}, {1.0, 2.0}, {4.0, 0.5}}) {
    const auto f = [&](double x) {
      const double d = gamma_pdf_oracle(x, k, 0.0, scale);
      return d > 0.0 ? -d * std::log(d) : 0.0;
    };
    const double h = integrate(f, 0.0, 60 * scale);
    EXPECT_NEAR(GammaParams({k, 0.0, scale}).entropy(), h, 1e-6) << k;
  }
}

TEST(Gamma, RecoversKnownParameters) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto xs = gamma_draws(seed, 50000, 2.19, -2.06, 17.11);
    const GammaParams p = fit_gamma(xs);
    EXPECT_NEAR(p.k, 2.19, 0.05 * 2.19) << seed;
    EXPECT_NEAR(p.mu, -2.06, 0.05 * 2.06) << seed;
    EXPECT_NEAR(p.gamma_scale, 17.11, 0.05 * 17.11) << seed;
  }
}

TEST(Gamma, ExponentialDataGivesUnitShape) {
  for (std::uint64_t seed : {4, 5}) {
    const GammaParams p = fit_gamma(exp_draws(seed, 20000, 0.4));
    EXPECT_GE(p.k, 0.9);
    EXPECT_LE(p.k, 1.1);
  }
}

TEST(Gamma, FittedParametersAreLocallyOptimal) {
  const auto xs = gamma_draws(9, 5000, 3.0, 5.0, 4.0);
  const GammaParams best = fit_gamma(xs);
  const double ll = gamma_log_likelihood(xs, best);
  for (int which = 0; which < 3; ++which)
    for (double f : {0.99, 1.01}) {
      GammaParams p = best;
      (which == 0 ? p.k : which == 1 ? p.mu : p.gamma_scale) *= f;
      EXPECT_LE(gamma_log_likelihood(xs, p), ll) << which << " " << f;
    }
}

TEST(Gamma, MeanLogLikelihoodMatchesNegativeEntropy) {
  const auto xs = gamma_draws(12, 50000, 2.19, 0.0, 17.11);
  const GammaParams p = fit_gamma(xs);
  const double per_sample = gamma_log_likelihood(xs, p) / xs.size();
  const auto f = [&](double x) {
    const double d = gamma_pdf_oracle(x, 2.19, 0.0, 17.11);
    return d > 0.0 ? d * std::log(d) : 0.0;
  };
  const double expected = integrate(f, 0.0, 60 * 17.11);
  EXPECT_NEAR(per_sample, expected, 0.02 * std::abs(expected));
}

TEST(Gamma, Errors) {
  expect_code(ErrorCode::InsufficientSamples, [] { fit_gamma(std::vector<double>(29, 1.0)); });
  expect_code(ErrorCode::DegenerateSample, [] { fit_gamma(std::vector<double>(40, 3.0)); });
  expect_code(ErrorCode::InvalidArgument, [] { GammaParams{0.0, 0.0, 1.0}.validate(); });
}

TEST(Exp, ClosedFormIsInverseMean) {
  Rng r(21);
  std::vector<double> xs(1000);
  for (double& x : xs) x = r.uniform(0.0, 50.0);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  EXPECT_NEAR(fit_exp(xs).lambda_rate, 1.0 / mean, 1e-12 / mean);
  EXPECT_DOUBLE_EQ(fit_exp(std::vector<double>(17, 4.0)).lambda_rate, 0.25);
}

TEST(Exp, RecoversRate) {
  EXPECT_NEAR(fit_exp(exp_draws(22, 50000, 2.2)).lambda_rate, 2.2, 0.02 * 2.2);
}

TEST(Exp, Errors) {
  expect_code(ErrorCode::InsufficientSamples, [] { fit_exp(std::vector<double>{}); });
  expect_code(ErrorCode::AllZeroSamples, [] { fit_exp(std::vector<double>(5, 0.0)); });
  expect_code(ErrorCode::InvalidArgument, [] { fit_exp(std::vector<double>{1.0, -1.0}); });
}

TEST(LogLikelihood, FloorAppliesBelowLocation) {
  RefModel m;
  m.iki = {2.0, 10.0, 5.0};
  m.ptt = {0.5};
  EXPECT_DOUBLE_EQ(iki_log_likelihood(std::vector<double>{3.0}, m), std::log(1e-12));
  EXPECT_DOUBLE_EQ(iki_log_likelihood(std::vector<double>{1e6}, m), std::log(1e-12));
  EXPECT_DOUBLE_EQ(ptt_log_likelihood(std::vector<double>{2.0}, m), std::log(0.5) - 1.0);
}

TEST(LogLikelihood, TotalIsSumOfChannels) {
  const FeatureSeries f = series(30);
  std::vector<FeatureSeries> games{series(31), series(32), series(33), series(34)};
  const RefModel m = fit_reference(std::span<const FeatureSeries>(games));
  EXPECT_EQ(log_likelihood(f, m), iki_log_likelihood(f.iki, m) + ptt_log_likelihood(f.ptt, m));
}

TEST(LogLikelihood, InvariantUnderPermutationAndDuplication) {
  std::vector<FeatureSeries> games{series(41), series(42), series(43), series(44)};
  const RefModel m = fit_reference(std::span<const FeatureSeries>(games));
  FeatureSeries f = series(45);
  const double base = log_likelihood(f, m);
  Rng r(3);
  for (int trial = 0; trial < 5; ++trial) {
    FeatureSeries g = f;
    for (std::size_t i = g.iki.size(); i > 1; --i) std::swap(g.iki[i - 1], g.iki[r.below(i)]);
    for (std::size_t i = g.ptt.size(); i > 1; --i) std::swap(g.ptt[i - 1], g.ptt[r.below(i)]);
    EXPECT_EQ(log_likelihood(g, m), base);
  }
  FeatureSeries twice = f;
  twice.iki.insert(twice.iki.end(), f.iki.begin(), f.iki.end());
  twice.ptt.insert(twice.ptt.end(), f.ptt.begin(), f.ptt.end());
  EXPECT_EQ(log_likelihood(twice, m), base);
}

TEST(Reference, DuplicatedGameFitsLikeTheGameAlone) {
  const FeatureSeries f = extract_features(oracle::random_log(77, 400));
  const std::vector<FeatureSeries> four(4, f), eight(8, f);
  const RefModel a = fit_reference(std::span<const FeatureSeries>(four));
  const RefModel b = fit_reference(std::span<const FeatureSeries>(eight));
  const GammaParams alone = fit_gamma(f.iki);
  EXPECT_EQ(a.iki, alone);
  EXPECT_EQ(a.ptt.lambda_rate, fit_exp(f.ptt).lambda_rate);
  EXPECT_EQ(a.iki, b.iki);
  EXPECT_EQ(a.ptt.lambda_rate, b.ptt.lambda_rate);
  EXPECT_EQ(a.ll_ref_mean, log_likelihood(f, a));
  EXPECT_DOUBLE_EQ(nll(log_likelihood(f, a), a), 1.0);
}

TEST(Reference, Errors) {
  const std::vector<FeatureSeries> three(3, series(50));
  expect_code(ErrorCode::InsufficientData, [&] { fit_reference(std::span<const FeatureSeries>(three)); });
  std::vector<FeatureSeries> four(4, series(50));
  four[2].ptt.clear();
  expect_code(ErrorCode::EmptyFeatures, [&] { fit_reference(std::span<const FeatureSeries>(four)); });
  expect_code(ErrorCode::ZeroLL, [] { (void)nll(0.0, -3.0); });
}

TEST(Nll, Cases) {
  EXPECT_DOUBLE_EQ(nll(-4.0, -4.0), 1.0);
  EXPECT_DOUBLE_EQ(nll(-8.0, -4.0), 0.5);
  EXPECT_DOUBLE_EQ(nll(-2.0, -4.0), 2.0);
}

TEST(Reference, JsonRoundTrip) {
  std::vector<FeatureSeries> games{series(61), series(62), series(63), series(64)};
  const RefModel m = fit_reference(std::span<const FeatureSeries>(games));
  const RefModel back = ref_model_from_json(nlohmann::json::parse(to_json(m).dump()));
  EXPECT_EQ(back.iki, m.iki);
  EXPECT_EQ(back.ptt.lambda_rate, m.ptt.lambda_rate);
  EXPECT_EQ(back.ll_ref_mean, m.ll_ref_mean);
  EXPECT_EQ(back.fit.iki_samples, m.fit.iki_samples);
  auto bad = to_json(m);
  bad["schema"] = "other/2";
  EXPECT_THROW(ref_model_from_json(bad), Error);
  bad = to_json(m);
  bad.erase("k");
  EXPECT_THROW(ref_model_from_json(bad), Error);
  expect_code(ErrorCode::Io, [] { load_model("/nonexistent/dir/model.json"); });
}

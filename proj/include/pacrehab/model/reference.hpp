#pragma once

#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pacrehab/error.hpp"
#include "pacrehab/model/exponential.hpp"
#include "pacrehab/model/gamma.hpp"
#include "pacrehab/telemetry/features.hpp"

namespace pacrehab {

/// Probability floor: samples with density below this contribute log(floor).
inline constexpr double kPdfFloor = 1e-12;

/// Baseline gameplay model: Gamma inter-key intervals and exponential
/// turning times, assumed independent.
struct RefModel {
  GammaParams iki;
  ExpParams ptt;
  /// Mean per-game log-likelihood over the baseline games.
  double ll_ref_mean = 0.0;
  /// The same mean restricted to one channel; used by single-feature models.
  double ll_ref_iki_mean = 0.0;
  double ll_ref_ptt_mean = 0.0;

  struct Metadata {
    int games = 0;
    int iki_samples = 0;
    int ptt_samples = 0;
    int gamma_iterations = 0;
    bool gamma_location_fallback = false;
  } fit;

  void validate() const {
    iki.validate();
    ptt.validate();
    if (!std::isfinite(ll_ref_mean)) throw Error(ErrorCode::InvalidArgument, "ll_ref_mean must be finite");
  }
};

/// Per-channel average log-likelihood of one game.
struct LogLikelihood {
  double iki = 0.0;
  double ptt = 0.0;
  double total() const { return iki + ptt; }
};

namespace detail {

template <class Dist>
double floored_mean_log_pdf(std::span<const double> xs, const Dist& d) {
  const double floor = std::log(kPdfFloor);
  return WeightedSample(xs).mean([&](double x) { return std::max(d.log_pdf(x), floor); });
}

}  // namespace detail

inline double iki_log_likelihood(std::span<const double> iki, const RefModel& m) {
  if (iki.empty()) throw Error(ErrorCode::EmptyFeatures, "no IKI samples");
  return detail::floored_mean_log_pdf(iki, m.iki);
}

inline double ptt_log_likelihood(std::span<const double> ptt, const RefModel& m) {
  if (ptt.empty()) throw Error(ErrorCode::EmptyFeatures, "no PTT samples");
  return detail::floored_mean_log_pdf(ptt, m.ptt);
}

inline LogLikelihood log_likelihood_parts(const FeatureSeries& f, const RefModel& m) {
  if (f.iki.empty() || f.ptt.empty())
    throw Error(ErrorCode::EmptyFeatures, "both IKI and PTT samples are required");
  return {iki_log_likelihood(f.iki, m), ptt_log_likelihood(f.ptt, m)};
}

/// Mean log-density of the IKI samples plus mean log-density of the PTT samples.
inline double log_likelihood(const FeatureSeries& f, const RefModel& m) {
  return log_likelihood_parts(f, m).total();
}

/// Normalised likelihood: baseline mean LL over this LL (1 = baseline-like,
/// smaller = less likely than baseline play).
inline double nll(double ll, double ll_ref_mean) {
  if (ll == 0.0) throw Error(ErrorCode::ZeroLL, "log-likelihood is zero");
  return ll_ref_mean / ll;
}

inline double nll(double ll, const RefModel& m) { return nll(ll, m.ll_ref_mean); }

/// Fits the model to pooled baseline features; the reference LL is the mean
/// of the per-game LLs of the same games.
inline RefModel fit_reference(std::span<const FeatureSeries> games, const GammaFitOptions& opt = {}) {
  if (games.size() < 4) throw Error(ErrorCode::InsufficientData, "need at least 4 baseline games");
  std::vector<double> iki;
  std::vector<double> ptt;
  for (const FeatureSeries& g : games) {
    iki.insert(iki.end(), g.iki.begin(), g.iki.end());
    ptt.insert(ptt.end(), g.ptt.begin(), g.ptt.end());
  }
  RefModel m;
  const GammaFit gf = fit_gamma_report(iki, opt);
  m.iki = gf.params;
  m.ptt = fit_exp(ptt);
  double sum = 0.0;
  double sum_iki = 0.0;
  double sum_ptt = 0.0;
  for (const FeatureSeries& g : games) {
    const LogLikelihood ll = log_likelihood_parts(g, m);
    sum += ll.total();
    sum_iki += ll.iki;
    sum_ptt += ll.ptt;
  }
  const double n = static_cast<double>(games.size());
  m.ll_ref_mean = sum / n;
  m.ll_ref_iki_mean = sum_iki / n;
  m.ll_ref_ptt_mean = sum_ptt / n;
  m.fit = {static_cast<int>(games.size()), static_cast<int>(iki.size()), static_cast<int>(ptt.size()),
           gf.outer_iterations, gf.location_fallback};
  return m;
}

inline RefModel fit_reference(std::span<const EventLog> logs, const GammaFitOptions& opt = {}) {
  std::vector<FeatureSeries> features;
  features.reserve(logs.size());
  for (const EventLog& log : logs) features.push_back(extract_features(log));
  return fit_reference(std::span<const FeatureSeries>(features), opt);
}

// Model file: a small versioned JSON document.
inline constexpr const char* kModelSchema = "pacrehab.refmodel/1";

inline nlohmann::ordered_json to_json(const RefModel& m) {
  nlohmann::ordered_json j;
  j["schema"] = kModelSchema;
  j["k"] = m.iki.k;
  j["mu"] = m.iki.mu;
  j["gamma_scale"] = m.iki.gamma_scale;
  j["lambda_rate"] = m.ptt.lambda_rate;
  j["ll_ref_mean"] = m.ll_ref_mean;
  j["ll_ref_iki_mean"] = m.ll_ref_iki_mean;
  j["ll_ref_ptt_mean"] = m.ll_ref_ptt_mean;
  j["fit"] = {{"games", m.fit.games},
              {"iki_samples", m.fit.iki_samples},
              {"ptt_samples", m.fit.ptt_samples},
              {"gamma_iterations", m.fit.gamma_iterations},
              {"gamma_location_fallback", m.fit.gamma_location_fallback}};
  return j;
}

inline RefModel ref_model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kModelSchema)
      throw Error(ErrorCode::InvalidArgument, "unsupported model schema");
    RefModel m;
    m.iki = {j.at("k").get<double>(), j.at("mu").get<double>(), j.at("gamma_scale").get<double>()};
    m.ptt = {j.at("lambda_rate").get<double>()};
    m.ll_ref_mean = j.at("ll_ref_mean").get<double>();
    m.ll_ref_iki_mean = j.value("ll_ref_iki_mean", 0.0);
    m.ll_ref_ptt_mean = j.value("ll_ref_ptt_mean", 0.0);
    if (j.contains("fit")) {
      const auto& f = j["fit"];
      m.fit = {f.value("games", 0), f.value("iki_samples", 0), f.value("ptt_samples", 0),
               f.value("gamma_iterations", 0), f.value("gamma_location_fallback", false)};
    }
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, std::string("model file: ") + ex.what());
  }
}

inline void save_model(const std::string& path, const RefModel& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << to_json(m).dump(2) << '\n';
}

inline RefModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  try {
    return ref_model_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, std::string("model file: ") + ex.what());
  }
}

}  // namespace pacrehab

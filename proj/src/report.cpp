#include "digestlab/report.hpp"

#include <chrono>
#include <ctime>

namespace digestlab {

namespace {

using json = nlohmann::ordered_json;

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

}  // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::low_group_reliability:
      return "low_group_reliability";
    case Rule::general_dominance:
      return "general_dominance";
    case Rule::estimation_failure:
      return "estimation_failure";
  }
  return "unknown";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

FitReport fit(const ResponseMatrix& responses, const SelectionConfig& config, std::string instrument_source) {
  FitReport report;
  report.instrument_source = std::move(instrument_source);
  report.item_ids = responses.item_ids();
  report.respondents = responses.rows();
  report.config = config;
  report.seed = config.seed;
  const auto corr = correlate(responses, config.corr_kind);
  report.trace = select_factor_count(corr, config);
  if (const auto* chosen = report.trace.chosen()) {
    report.weights = weights_from_report(*chosen->report);
  }
  report.generated_at = utc_timestamp();
  return report;
}

json to_json(const ReliabilityReport& report) {
  json out;
  out["k"] = report.k;
  out["omega_total"] = report.omega_total;
  out["omega_general"] = report.omega_general;
  out["omega_group"] = vector_json(report.omega_group);
  out["ecv"] = report.ecv;
  out["rmsr"] = report.rmsr;
  return out;
}

json to_json(const BifactorSolution& solution) {
  json out;
  out["general"] = vector_json(solution.general);
  out["group"] = matrix_json(solution.group);
  out["uniqueness"] = vector_json(solution.uniqueness);
  return out;
}

json to_json(const FactorWeightSet& weights) {
  json out;
  out["label"] = weights.label();
  out["raw_sum"] = weights.raw_sum();
  json entries = json::array();
  for (const auto& e : weights.entries()) entries.push_back({{"factor", e.factor}, {"weight", e.weight}});
  out["weights"] = std::move(entries);
  return out;
}

json to_json(const DigestionScore& score, const FactorWeightSet& weights) {
  json out;
  out["label"] = weights.label();
  out["rho"] = score.rho;
  json contributions = json::array();
  for (std::size_t i = 0; i < score.contributions.size(); ++i) {
    contributions.push_back({{"factor", score.contributions[i].first},
                             {"weight", weights.entries()[i].weight},
                             {"contribution", score.contributions[i].second}});
  }
  out["contributions"] = std::move(contributions);
  return out;
}

json to_json(const CandidateFit& candidate) {
  json out;
  out["k"] = candidate.k;
  out["verdict"] = candidate.verdict.accepted ? "accept" : "reject";
  json reasons = json::array();
  for (const auto& r : candidate.verdict.reasons) {
    json factors = json::array();
    for (int f : r.factors) factors.push_back(f + 1);
    reasons.push_back({{"rule", std::string(to_string(r.rule))}, {"message", r.message}, {"factors", std::move(factors)}});
  }
  out["reasons"] = std::move(reasons);
  out["warnings"] = candidate.warnings;
  if (candidate.report) out["reliability"] = to_json(*candidate.report);
  out["dominance"] = vector_json(candidate.dominance);
  if (candidate.gamma) out["second_order"] = vector_json(*candidate.gamma);
  if (candidate.oblique) {
    out["pattern"] = matrix_json(candidate.oblique->pattern.values);
    out["phi"] = matrix_json(candidate.oblique->phi);
  }
  if (candidate.solution) out["bifactor"] = to_json(*candidate.solution);
  return out;
}

json to_json(const FitReport& report) {
  json out;
  out["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  out["generated_at"] = report.generated_at;
  out["seed"] = report.seed;
  out["instrument"] = {{"source", report.instrument_source},
                       {"items", report.item_ids},
                       {"respondents", report.respondents}};
  out["correlation"] = std::string(to_string(report.config.corr_kind));
  out["config"] = {{"k_min", report.config.k_min},
                   {"k_max", report.config.k_max},
                   {"min_group_omega", report.config.min_group_omega},
                   {"max_general_dominance", report.config.max_general_dominance}};
  json trace = json::array();
  for (const auto& e : report.trace.entries) trace.push_back(to_json(e));
  out["trace"] = std::move(trace);
  out["outcome"] = report.trace.no_model() ? "no_model" : "model";
  out["chosen_k"] = report.trace.chosen_k ? json(*report.trace.chosen_k) : json(nullptr);
  if (const auto* chosen = report.trace.chosen()) {
    json model;
    model["bifactor"] = to_json(*chosen->solution);
    model["reliability"] = to_json(*chosen->report);
    if (report.weights) model["weights"] = to_json(*report.weights);
    out["model"] = std::move(model);
  } else {
    out["model"] = nullptr;
  }
  return out;
}

}  // namespace digestlab

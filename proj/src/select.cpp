#include "digestlab/select.hpp"

#include <cstdio>
#include <string>

#include "digestlab/error.hpp"

namespace digestlab {

namespace {

std::string format_threshold(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void SelectionConfig::validate(Eigen::Index p) const {
  if (k_min < 2) throw ConfigError("k_min must be at least 2 (got " + std::to_string(k_min) + ")");
  if (k_min > k_max) {
    throw ConfigError("k_min (" + std::to_string(k_min) + ") exceeds k_max (" + std::to_string(k_max) + ")");
  }
  if (2 * static_cast<Eigen::Index>(k_max) > p) {
    throw ConfigError("k_max (" + std::to_string(k_max) + ") exceeds half the item count (" +
                      std::to_string(p) + " items)");
  }
  if (!(min_group_omega > 0.0 && min_group_omega < 1.0)) {
    throw ConfigError("min_group_omega must lie in (0, 1)");
  }
  if (!(max_general_dominance > 0.0 && max_general_dominance < 1.0)) {
    throw ConfigError("max_general_dominance must lie in (0, 1)");
  }
}

Verdict evaluate_k(const ReliabilityReport& report, const Eigen::VectorXd& dominance,
                   const SelectionConfig& config) {
  if (report.omega_group.size() != dominance.size()) {
    throw InputError("evaluate_k: report has " + std::to_string(report.omega_group.size()) +
                     " group factors but dominance has " + std::to_string(dominance.size()));
  }
  Verdict verdict;
  Rejection low{Rule::low_group_reliability,
                "group reliability below " + format_threshold(config.min_group_omega), {}};
  Rejection dominant{Rule::general_dominance,
                     "general-factor dominance ≥ " + format_threshold(config.max_general_dominance), {}};
  for (Eigen::Index i = 0; i < dominance.size(); ++i) {
    if (report.omega_group(i) < config.min_group_omega) low.factors.push_back(static_cast<int>(i));
    if (dominance(i) >= config.max_general_dominance) dominant.factors.push_back(static_cast<int>(i));
  }
  if (!low.factors.empty()) verdict.reasons.push_back(std::move(low));
  if (!dominant.factors.empty()) verdict.reasons.push_back(std::move(dominant));
  verdict.accepted = verdict.reasons.empty();
  return verdict;
}

Eigen::VectorXd general_dominance(const BifactorSolution& solution) {
  const Eigen::Index k = solution.group_factors();
  Eigen::VectorXd general_part = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd group_part = Eigen::VectorXd::Zero(k);
  std::vector<int> members(static_cast<std::size_t>(k), 0);
  for (Eigen::Index j = 0; j < solution.items(); ++j) {
    Eigen::Index owner = 0;
    solution.group.row(j).cwiseAbs().maxCoeff(&owner);
    general_part(owner) += solution.general(j) * solution.general(j);
    group_part(owner) += solution.group(j, owner) * solution.group(j, owner);
    ++members[static_cast<std::size_t>(owner)];
  }
  Eigen::VectorXd out(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double total = general_part(i) + group_part(i);
    out(i) = (members[static_cast<std::size_t>(i)] == 0 || total == 0.0) ? 1.0 : general_part(i) / total;
  }
  return out;
}

const CandidateFit* SelectionTrace::chosen() const {
  if (!chosen_k) return nullptr;
  for (const auto& e : entries) {
    if (e.k == *chosen_k) return &e;
  }
  return nullptr;
}

CandidateFit fit_candidate(const CorrelationMatrix& corr, int k, const SelectionConfig& config) {
  CandidateFit fit;
  fit.k = k;
  try {
    const auto extraction = extract_paf(corr, k);
    if (!extraction.heywood_items.empty()) {
      fit.warnings.push_back("Heywood case: " + std::to_string(extraction.heywood_items.size()) +
                             " item communalities clamped at 0.998 during extraction");
    }
    RotationOptions rotation;
    rotation.seed = config.seed;
    fit.oblique = rotate_quartimin(extraction.loadings, rotation);
    fit.gamma = second_order(fit.oblique->phi);
    std::vector<Eigen::Index> clamped;
    fit.solution = schmid_leiman(*fit.oblique, *fit.gamma, &clamped);
    if (!clamped.empty()) {
      fit.warnings.push_back("Heywood case: " + std::to_string(clamped.size()) +
                             " item communalities clamped at 0.998 after Schmid-Leiman");
    }
    fit.report = reliability(corr, *fit.solution);
    fit.dominance = general_dominance(*fit.solution);
    fit.verdict = evaluate_k(*fit.report, fit.dominance, config);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fit.verdict.accepted = false;
    fit.verdict.reasons.push_back({Rule::estimation_failure, e.what(), {}});
  }
  return fit;
}

SelectionTrace select_factor_count(const CorrelationMatrix& corr, const SelectionConfig& config) {
  config.validate(corr.size());
  SelectionTrace trace;
  for (int k = config.k_min; k <= config.k_max; ++k) {
    trace.entries.push_back(fit_candidate(corr, k, config));
    if (trace.entries.back().verdict.accepted) trace.chosen_k = k;
  }
  return trace;
}

}  // namespace digestlab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "digestlab/bifactor.hpp"
#include "digestlab/corr.hpp"
#include "digestlab/efa.hpp"

namespace digestlab {

struct SelectionConfig {
  int k_min = 2;
  int k_max = 6;
  double min_group_omega = 0.1;
  double max_general_dominance = 0.6;
  CorrelationKind corr_kind = CorrelationKind::pearson;
  std::uint64_t seed = 0;

  // Throws ConfigError unless 2 <= k_min <= k_max <= p/2 and both
  // thresholds lie in (0, 1).
  void validate(Eigen::Index p) const;
};

enum class Rule {
  low_group_reliability,  // some omega_group(i) < min_group_omega
  general_dominance,      // some dominance_i >= max_general_dominance
  estimation_failure,     // the pipeline for this k did not produce a model
};

struct Rejection {
  Rule rule;
  std::string message;
  std::vector<int> factors;  // 0-based offending group factors, if any
};

struct Verdict {
  bool accepted = true;
  std::vector<Rejection> reasons;
};

// Applies the two rejection rules; every triggered rule yields one reason.
Verdict evaluate_k(const ReliabilityReport& report, const Eigen::VectorXd& dominance,
                   const SelectionConfig& config);

// Per-factor general dominance over the items whose largest-magnitude group
// loading is on that factor. Factors owning no items get 1.0.
Eigen::VectorXd general_dominance(const BifactorSolution& solution);

struct CandidateFit {
  int k = 0;
  std::optional<ObliqueSolution> oblique;
  std::optional<Eigen::VectorXd> gamma;
  std::optional<BifactorSolution> solution;
  std::optional<ReliabilityReport> report;
  Eigen::VectorXd dominance;
  Verdict verdict;
  std::vector<std::string> warnings;
};

struct SelectionTrace {
  std::vector<CandidateFit> entries;  // ordered by k
  std::optional<int> chosen_k;        // largest accepted k

  bool no_model() const { return !chosen_k.has_value(); }
  const CandidateFit* chosen() const;
};

// Fits one candidate: PAF -> quartimin -> second order -> Schmid-Leiman.
// Estimation errors are recorded as an estimation_failure rejection.
CandidateFit fit_candidate(const CorrelationMatrix& corr, int k, const SelectionConfig& config);

SelectionTrace select_factor_count(const CorrelationMatrix& corr, const SelectionConfig& config);

}  // namespace digestlab

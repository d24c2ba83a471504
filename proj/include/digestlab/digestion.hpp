#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "digestlab/bifactor.hpp"

namespace digestlab {

// Named group-factor weights, normalized to sum to 1.
class FactorWeightSet {
 public:
  struct Entry {
    std::string factor;
    double weight;
  };

  FactorWeightSet() = default;
  // Weights must be non-negative with a positive sum; they are divided by
  // their sum. Factor names must be unique. Throws InputError otherwise.
  FactorWeightSet(std::string label, std::vector<Entry> raw);

  const std::string& label() const { return label_; }
  const std::vector<Entry>& entries() const { return entries_; }
  // Sum of the weights as given, before normalization.
  double raw_sum() const { return raw_sum_; }

 private:
  std::string label_;
  std::vector<Entry> entries_;
  double raw_sum_ = 0.0;
};

// Media presets A (news), B (ads), C (shopping), D (papers/reports).
// Throws InputError for any other label.
FactorWeightSet builtin_weights(std::string_view media);

// w_i = omega_group(i) / sum_j omega_group(j); names default to F1..Fk.
FactorWeightSet weights_from_report(const ReliabilityReport& report,
                                    std::vector<std::string> factor_names = {});

// Raters x factors grid of evaluations in [0, 1].
struct EvaluationSheet {
  std::vector<std::string> factors;
  std::vector<std::vector<double>> ratings;  // one row per rater

  void validate() const;
};

EvaluationSheet parse_evaluation_sheet(std::istream& in);
EvaluationSheet load_evaluation_sheet(const std::string& path);

// Weight-set file: JSON {"label": ..., "weights": {"factor": w, ...}} or
// {"label": ..., "weights": [{"factor": ..., "weight": ...}, ...]}.
FactorWeightSet parse_weight_set(std::string_view json_text);
FactorWeightSet load_weight_set(const std::string& path);

// Per-factor arithmetic mean across raters.
std::map<std::string, double> average_evaluations(const EvaluationSheet& sheet);

struct DigestionScore {
  double rho = 0.0;
  std::vector<std::pair<std::string, double>> contributions;  // w_i * ev_i, weight-set order
};

// rho = sum_i w_i ev_i. The ev names must match the weight set exactly.
DigestionScore score(const FactorWeightSet& weights, const std::map<std::string, double>& ev);

}  // namespace digestlab

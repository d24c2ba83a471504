#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "digestlab/digestion.hpp"
#include "digestlab/select.hpp"

namespace digestlab {

inline constexpr const char* kToolName = "digestlab";
inline constexpr const char* kToolVersion = "0.1.0";

struct FitReport {
  std::string instrument_source;  // "bundled", a file path, or "responses header"
  std::vector<std::string> item_ids;
  std::size_t respondents = 0;
  SelectionConfig config;
  SelectionTrace trace;
  std::optional<FactorWeightSet> weights;  // derived from the chosen model
  std::uint64_t seed = 0;
  std::string generated_at;  // excluded from reproducibility comparisons
};

// Runs correlation + selection and derives weights from the chosen model.
FitReport fit(const ResponseMatrix& responses, const SelectionConfig& config, std::string instrument_source);

nlohmann::ordered_json to_json(const ReliabilityReport& report);
nlohmann::ordered_json to_json(const BifactorSolution& solution);
nlohmann::ordered_json to_json(const FactorWeightSet& weights);
nlohmann::ordered_json to_json(const DigestionScore& score, const FactorWeightSet& weights);
nlohmann::ordered_json to_json(const CandidateFit& candidate);
nlohmann::ordered_json to_json(const FitReport& report);

std::string_view to_string(Rule rule);

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace digestlab

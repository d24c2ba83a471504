#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "digestlab/instrument.hpp"
#include "digestlab/random.hpp"

namespace digestlab {

using Thresholds = std::array<double, 5>;

// Population bifactor model to sample from.
struct GeneratorSpec {
  Eigen::VectorXd general;  // p
  Eigen::MatrixXd group;    // p x k
  std::size_t n = 0;
  std::uint64_t seed = 0;
  // Cut points for 6-category discretization: empty = equiprobable for every
  // item, one entry = shared by all items, p entries = per item.
  std::vector<Thresholds> thresholds;
  std::vector<std::string> item_ids;  // optional; defaults to x1..xp

  Eigen::Index items() const { return general.size(); }
  Eigen::VectorXd uniqueness() const;
  std::vector<std::string> resolved_item_ids() const;
  const Thresholds& thresholds_for(Eigen::Index item) const;

  // Throws InputError on shape mismatch, negative implied uniqueness or
  // non-increasing thresholds.
  void validate() const;
};

GeneratorSpec parse_generator_spec(std::string_view json_text);
GeneratorSpec load_generator_spec(const std::string& path);

enum class ThresholdPreset { equiprobable, skewed_low, skewed_high };

// Cut points at standard-normal quantiles of fixed cumulative proportions:
// equiprobable 1/6..5/6, skewed_low (0.30, 0.55, 0.75, 0.90, 0.97) and its
// mirror image skewed_high.
Thresholds threshold_preset(ThresholdPreset preset);

// rows x items matrix of continuous scores.
Eigen::MatrixXd generate_continuous(const GeneratorSpec& spec);

int discretize(double value, const Thresholds& cuts);

ResponseMatrix generate_likert(const GeneratorSpec& spec);

}  // namespace digestlab

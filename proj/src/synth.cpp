#include "digestlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "digestlab/error.hpp"
#include "digestlab/normal.hpp"

namespace digestlab {

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

double NormalStream::uniform() {
  // Top 53 bits, shifted half a step so the value is never 0 or 1.
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double NormalStream::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

// ---------------------------------------------------------------------------

Thresholds threshold_preset(ThresholdPreset preset) {
  std::array<double, 5> cumulative{};
  switch (preset) {
    case ThresholdPreset::equiprobable:
      cumulative = {1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6};
      break;
    case ThresholdPreset::skewed_low:
      cumulative = {0.30, 0.55, 0.75, 0.90, 0.97};
      break;
    case ThresholdPreset::skewed_high:
      cumulative = {0.03, 0.10, 0.25, 0.45, 0.70};
      break;
  }
  Thresholds cuts{};
  for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = normal::quantile(cumulative[i]);
  return cuts;
}

Eigen::VectorXd GeneratorSpec::uniqueness() const {
  return Eigen::VectorXd::Ones(general.size()) - general.cwiseAbs2() - group.rowwise().squaredNorm();
}

std::vector<std::string> GeneratorSpec::resolved_item_ids() const {
  if (!item_ids.empty()) return item_ids;
  std::vector<std::string> ids;
  for (Eigen::Index j = 0; j < items(); ++j) ids.push_back("x" + std::to_string(j + 1));
  return ids;
}

const Thresholds& GeneratorSpec::thresholds_for(Eigen::Index item) const {
  static const Thresholds kDefault = threshold_preset(ThresholdPreset::equiprobable);
  if (thresholds.empty()) return kDefault;
  if (thresholds.size() == 1) return thresholds.front();
  return thresholds[static_cast<std::size_t>(item)];
}

void GeneratorSpec::validate() const {
  const auto p = items();
  if (p < 1) throw InputError("generator spec: no items");
  if (group.rows() != p) {
    throw InputError("generator spec: group loadings have " + std::to_string(group.rows()) +
                     " rows, expected " + std::to_string(p));
  }
  const Eigen::VectorXd psi = uniqueness();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (psi(j) < 0.0) {
      std::ostringstream msg;
      msg << "generator spec: item " << j + 1 << " has negative implied uniqueness " << psi(j);
      throw InputError(msg.str());
    }
  }
  if (!item_ids.empty() && static_cast<Eigen::Index>(item_ids.size()) != p) {
    throw InputError("generator spec: item_ids length does not match the loadings");
  }
  if (thresholds.size() > 1 && static_cast<Eigen::Index>(thresholds.size()) != p) {
    throw InputError("generator spec: expected 1 or " + std::to_string(p) + " threshold sets");
  }
  for (const auto& cuts : thresholds) {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      if (!std::isfinite(cuts[i]) || (i > 0 && !(cuts[i] > cuts[i - 1]))) {
        throw InputError("generator spec: thresholds must be finite and strictly increasing");
      }
    }
  }
}

GeneratorSpec parse_generator_spec(std::string_view json_text) {
  GeneratorSpec spec;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    const auto general = doc.at("general").get<std::vector<double>>();
    spec.general = Eigen::Map<const Eigen::VectorXd>(general.data(), static_cast<Eigen::Index>(general.size()));
    const auto group = doc.at("group").get<std::vector<std::vector<double>>>();
    const auto k = group.empty() ? 0 : group.front().size();
    spec.group.resize(static_cast<Eigen::Index>(group.size()), static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < group.size(); ++r) {
      if (group[r].size() != k) throw InputError("generator spec: ragged group loading rows");
      for (std::size_t c = 0; c < k; ++c) spec.group(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = group[r][c];
    }
    spec.n = doc.value("n", std::size_t{0});
    spec.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("thresholds")) {
      const auto& t = doc["thresholds"];
      if (!t.empty() && t.front().is_number()) {
        spec.thresholds.push_back(t.get<Thresholds>());
      } else {
        spec.thresholds = t.get<std::vector<Thresholds>>();
      }
    }
    if (doc.contains("item_ids")) spec.item_ids = doc["item_ids"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("generator spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

GeneratorSpec load_generator_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open generator spec " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_generator_spec(buf.str());
}

Eigen::MatrixXd generate_continuous(const GeneratorSpec& spec) {
  spec.validate();
  const Eigen::Index p = spec.items();
  const Eigen::Index k = spec.group.cols();
  const Eigen::VectorXd unique_sd = spec.uniqueness().cwiseMax(0.0).cwiseSqrt();

  NormalStream rng(spec.seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(spec.n), p);
  Eigen::VectorXd factors(k);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double g = rng.normal();
    for (Eigen::Index i = 0; i < k; ++i) factors(i) = rng.normal();
    for (Eigen::Index j = 0; j < p; ++j) {
      out(r, j) = spec.general(j) * g + spec.group.row(j).dot(factors) + unique_sd(j) * rng.normal();
    }
  }
  return out;
}

int discretize(double value, const Thresholds& cuts) {
  return 1 + static_cast<int>(std::count_if(cuts.begin(), cuts.end(), [&](double c) { return value > c; }));
}

ResponseMatrix generate_likert(const GeneratorSpec& spec) {
  const Eigen::MatrixXd scores = generate_continuous(spec);
  ResponseMatrix out(spec.resolved_item_ids());
  std::vector<std::optional<int>> row(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = discretize(scores(r, j), spec.thresholds_for(j));
    }
    out.add_row(row);
  }
  return out;
}

}  // namespace digestlab

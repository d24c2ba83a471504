#include "digestlab/digestion.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "digestlab/error.hpp"

namespace digestlab {

namespace {

// Printed sums within this distance of 1 are taken as already normalized.
constexpr double kUnitSumTol = 1e-12;

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

FactorWeightSet::FactorWeightSet(std::string label, std::vector<Entry> raw)
    : label_(std::move(label)), entries_(std::move(raw)) {
  if (entries_.empty()) throw InputError("weight set '" + label_ + "' is empty");
  std::unordered_set<std::string> names;
  raw_sum_ = 0.0;
  for (const auto& e : entries_) {
    if (!names.insert(e.factor).second) {
      throw InputError("weight set '" + label_ + "': duplicate factor '" + e.factor + "'");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw InputError("weight set '" + label_ + "': factor '" + e.factor + "' has negative weight");
    }
    raw_sum_ += e.weight;
  }
  if (raw_sum_ <= 0.0) throw InputError("weight set '" + label_ + "': weights sum to zero");
  if (std::abs(raw_sum_ - 1.0) > kUnitSumTol) {
    for (auto& e : entries_) e.weight /= raw_sum_;
  }
}

FactorWeightSet builtin_weights(std::string_view media) {
  // Corrected per-media coefficients as printed. A sums to 1.010 and is
  // renormalized by the constructor.
  if (media == "A") return {"A", {{"未開拓性", 0.272}, {"簡潔性", 0.360}, {"親密性", 0.378}}};
  if (media == "B") return {"B", {{"網羅性", 0.384}, {"簡潔性", 0.312}, {"結論へのアクセス性", 0.304}}};
  if (media == "C") return {"C", {{"親密性", 0.279}, {"簡潔性", 0.400}, {"未開拓性", 0.321}}};
  if (media == "D") return {"D", {{"説明可能性", 0.557}, {"簡潔性", 0.443}}};
  throw InputError("unknown media label '" + std::string(media) + "' (expected A, B, C or D)");
}

FactorWeightSet weights_from_report(const ReliabilityReport& report, std::vector<std::string> factor_names) {
  const auto k = static_cast<std::size_t>(report.omega_group.size());
  if (factor_names.empty()) {
    for (std::size_t i = 0; i < k; ++i) factor_names.push_back("F" + std::to_string(i + 1));
  }
  if (factor_names.size() != k) {
    throw InputError("weights_from_report: " + std::to_string(factor_names.size()) + " names for " +
                     std::to_string(k) + " group factors");
  }
  if (report.omega_group.sum() <= 0.0) {
    throw InputError("weights_from_report: every group reliability is zero");
  }
  const double sum = report.omega_group.sum();
  std::vector<FactorWeightSet::Entry> entries;
  for (std::size_t i = 0; i < k; ++i) {
    entries.push_back({factor_names[i], report.omega_group(static_cast<Eigen::Index>(i)) / sum});
  }
  return {"k=" + std::to_string(k), std::move(entries)};
}

void EvaluationSheet::validate() const {
  if (factors.empty()) throw InputError("evaluation sheet has no factors");
  if (ratings.empty()) throw InputError("evaluation sheet has no raters");
  std::unordered_set<std::string> names;
  for (const auto& f : factors) {
    if (!names.insert(f).second) throw InputError("evaluation sheet: duplicate factor '" + f + "'");
  }
  for (std::size_t r = 0; r < ratings.size(); ++r) {
    if (ratings[r].size() != factors.size()) {
      throw InputError("evaluation sheet: rater " + std::to_string(r + 1) + " has " +
                       std::to_string(ratings[r].size()) + " values, expected " +
                       std::to_string(factors.size()));
    }
    for (std::size_t f = 0; f < factors.size(); ++f) {
      if (!in_unit_interval(ratings[r][f])) {
        std::ostringstream msg;
        msg << "evaluation sheet: rater " << r + 1 << ", factor '" << factors[f] << "': value "
            << ratings[r][f] << " outside [0, 1]";
        throw InputError(msg.str());
      }
    }
  }
}

EvaluationSheet parse_evaluation_sheet(std::istream& in) {
  EvaluationSheet sheet;
  std::string line;
  if (!csv::read_line(in, line)) throw InputError("evaluation sheet: empty file");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  sheet.factors = csv::split(line);
  std::size_t row = 0;
  while (csv::read_line(in, line)) {
    if (csv::is_blank(line)) continue;
    ++row;
    const auto fields = csv::split(line);
    std::vector<double> values;
    for (const auto& field : fields) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw InputError("evaluation sheet: row " + std::to_string(row) + ": invalid number '" + field + "'");
      }
      values.push_back(v);
    }
    sheet.ratings.push_back(std::move(values));
  }
  sheet.validate();
  return sheet;
}

EvaluationSheet load_evaluation_sheet(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open evaluation sheet " + path);
  return parse_evaluation_sheet(in);
}

FactorWeightSet parse_weight_set(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("weight set: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights")) throw InputError("weight set: missing 'weights'");
  const std::string label = doc.value("label", "custom");
  std::vector<FactorWeightSet::Entry> entries;
  const auto& w = doc["weights"];
  try {
    if (w.is_object()) {
      for (const auto& [name, value] : w.items()) entries.push_back({name, value.get<double>()});
    } else if (w.is_array()) {
      for (const auto& e : w) entries.push_back({e.at("factor").get<std::string>(), e.at("weight").get<double>()});
    } else {
      throw InputError("weight set: 'weights' must be an object or an array");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("weight set: ") + e.what());
  }
  return {label, std::move(entries)};
}

FactorWeightSet load_weight_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open weight file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_weight_set(buf.str());
}

std::map<std::string, double> average_evaluations(const EvaluationSheet& sheet) {
  sheet.validate();
  std::map<std::string, double> out;
  for (std::size_t f = 0; f < sheet.factors.size(); ++f) {
    double sum = 0.0;
    for (const auto& row : sheet.ratings) sum += row[f];
    out[sheet.factors[f]] = sum / static_cast<double>(sheet.ratings.size());
  }
  return out;
}

DigestionScore score(const FactorWeightSet& weights, const std::map<std::string, double>& ev) {
  for (const auto& [name, value] : ev) {
    bool known = false;
    for (const auto& e : weights.entries()) known = known || e.factor == name;
    if (!known) {
      throw InputError("factor '" + name + "' is not part of weight set '" + weights.label() + "'");
    }
    if (!in_unit_interval(value)) {
      std::ostringstream msg;
      msg << "evaluation of factor '" << name << "' is " << value << ", outside [0, 1]";
      throw InputError(msg.str());
    }
  }
  DigestionScore out;
  for (const auto& e : weights.entries()) {
    const auto it = ev.find(e.factor);
    if (it == ev.end()) {
      throw InputError("no evaluation for factor '" + e.factor + "' of weight set '" + weights.label() + "'");
    }
    const double c = e.weight * it->second;
    out.contributions.emplace_back(e.factor, c);
    out.rho += c;
  }
  return out;
}

}  // namespace digestlab

#include "digestlab/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "csv.hpp"
#include "digestlab/digestion.hpp"
#include "digestlab/error.hpp"
#include "digestlab/instrument.hpp"
#include "digestlab/report.hpp"
#include "digestlab/synth.hpp"

namespace digestlab::cli {

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DIGESTLAB_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("DIGESTLAB_SEED is not a non-negative integer: '" + std::string(text) + "'");
    }
    return value;
  }
  return fallback;
}

// Writes to the file named by path, or to out when path is empty.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
  if (!file) throw InputError("failed writing " + path);
}

struct FitArgs {
  std::string responses;
  std::string instrument;
  std::string corr = "pearson";
  std::optional<int> k_min;
  std::optional<int> k_max;
  double min_group_omega = SelectionConfig{}.min_group_omega;
  double max_dominance = SelectionConfig{}.max_general_dominance;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Instrument> loaded;
  const Instrument* instrument = nullptr;
  std::string source = "responses header";
  if (a.instrument == "bundled") {
    instrument = &bundled_instrument();
    source = "bundled";
  } else if (!a.instrument.empty()) {
    loaded = load_instrument(a.instrument);
    instrument = &*loaded;
    source = a.instrument;
  }
  const auto responses = load_responses(a.responses, instrument);

  SelectionConfig config;
  config.corr_kind = parse_correlation_kind(a.corr);
  config.k_min = a.k_min.value_or(config.k_min);
  const int half = static_cast<int>(responses.items() / 2);
  config.k_max = a.k_max.value_or(std::min(config.k_max, half));
  config.min_group_omega = a.min_group_omega;
  config.max_general_dominance = a.max_dominance;
  config.seed = resolve_seed(a.seed, kDefaultSeed);

  const auto report = fit(responses, config, source);
  for (const auto& entry : report.trace.entries) {
    for (const auto& w : entry.warnings) err << "warning: k = " << entry.k << ": " << w << '\n';
  }
  emit(a.out, out, to_json(report).dump(2) + "\n");
  if (report.trace.no_model()) {
    err << "no acceptable model in k = " << config.k_min << ".." << config.k_max << '\n';
    for (const auto& entry : report.trace.entries) {
      for (const auto& r : entry.verdict.reasons) err << "  k = " << entry.k << ": " << r.message << '\n';
    }
    return kExitNoModel;
  }
  return kExitOk;
}

struct ScoreArgs {
  std::string media;
  std::string weights;
  std::string ev;
  std::string out;
};

int run_score(const ScoreArgs& a, std::ostream& out) {
  if (a.media.empty() == a.weights.empty()) throw ConfigError("score: give exactly one of --media or --weights");
  const auto weights = a.media.empty() ? load_weight_set(a.weights) : builtin_weights(a.media);
  const auto ev = average_evaluations(load_evaluation_sheet(a.ev));
  const auto result = score(weights, ev);
  emit(a.out, out, to_json(result, weights).dump(2) + "\n");
  return kExitOk;
}

struct SimulateArgs {
  std::string spec;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  bool likert = false;
  std::string out;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  auto spec = load_generator_spec(a.spec);
  if (a.n) spec.n = *a.n;
  spec.seed = resolve_seed(a.seed, spec.seed);
  if (spec.n == 0) throw ConfigError("simulate: sample size is 0 (set --n or 'n' in the spec)");

  std::ostringstream text;
  if (a.likert) {
    write_responses(text, generate_likert(spec));
  } else {
    const auto ids = spec.resolved_item_ids();
    const auto scores = generate_continuous(spec);
    for (std::size_t j = 0; j < ids.size(); ++j) text << (j ? "," : "") << ids[j];
    text << '\n';
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      for (Eigen::Index j = 0; j < scores.cols(); ++j) text << (j ? "," : "") << csv::format_double(scores(r, j));
      text << '\n';
    }
  }
  emit(a.out, out, text.str());
  return kExitOk;
}

struct PairsArgs {
  std::string responses;
  std::string instrument = "bundled";
  std::string out;
};

int run_pairs(const PairsArgs& a, std::ostream& out) {
  const auto instrument = a.instrument == "bundled" ? bundled_instrument() : load_instrument(a.instrument);
  const auto responses = load_responses(a.responses, &instrument);
  std::ostringstream text;
  text << "pair_id,first,second,n,r,deviation,error\n";
  for (const auto& s : pair_asymmetry(responses, instrument)) {
    text << s.pair_id << ',' << s.first << ',' << s.second << ',' << s.n << ','
         << (s.r ? csv::format_double(*s.r) : "") << ',' << (s.deviation ? csv::format_double(*s.deviation) : "")
         << ",\"" << s.error << "\"\n";
  }
  emit(a.out, out, text.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bifactor reliability and digestion-efficiency scoring for Likert survey data", "digestlab"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Select a bifactor model for a response matrix and write a JSON report");
  fit_cmd->add_option("--responses", fit_args.responses, "Responses CSV (header = item ids)")->required();
  fit_cmd->add_option("--instrument", fit_args.instrument, "Instrument JSON, or 'bundled' for the 22-item default");
  fit_cmd->add_option("--corr", fit_args.corr, "Correlation estimator")
      ->check(CLI::IsMember({"pearson", "polychoric"}));
  fit_cmd->add_option("--k-min", fit_args.k_min, "Smallest group-factor count (default 2)");
  fit_cmd->add_option("--k-max", fit_args.k_max, "Largest group-factor count (default min(6, items/2))");
  fit_cmd->add_option("--min-group-omega", fit_args.min_group_omega, "Reject when some omega_group is below this")
      ->capture_default_str();
  fit_cmd->add_option("--max-dominance", fit_args.max_dominance, "Reject when some factor's general dominance reaches this")
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit_args.seed, "Rotation seed (default: $DIGESTLAB_SEED or 12345)");
  fit_cmd->add_option("--out", fit_args.out, "Report path (default stdout)");

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "Compute the digestion efficiency rho");
  score_cmd->add_option("--media", score_args.media, "Built-in weights: A, B, C or D");
  score_cmd->add_option("--weights", score_args.weights, "Custom weight-set JSON");
  score_cmd->add_option("--ev", score_args.ev, "Evaluation sheet CSV (header = factor names)")->required();
  score_cmd->add_option("--out", score_args.out, "Output path (default stdout)");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate data from a bifactor population model");
  sim_cmd->add_option("--spec", sim_args.spec, "Generator spec JSON")->required();
  sim_cmd->add_option("--n", sim_args.n, "Sample size (overrides the spec)");
  sim_cmd->add_option("--seed", sim_args.seed, "Seed (overrides $DIGESTLAB_SEED and the spec)");
  sim_cmd->add_flag("--likert", sim_args.likert, "Discretize into 6-point codes");
  sim_cmd->add_option("--out", sim_args.out, "CSV path (default stdout)");

  PairsArgs pairs_args;
  auto* pairs_cmd = app.add_subcommand("pairs", "Correlation between the two items of each opposite pair");
  pairs_cmd->add_option("--responses", pairs_args.responses, "Responses CSV")->required();
  pairs_cmd->add_option("--instrument", pairs_args.instrument, "Instrument JSON, or 'bundled'")->capture_default_str();
  pairs_cmd->add_option("--out", pairs_args.out, "CSV path (default stdout)");

  std::vector<const char*> argv{"digestlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*fit_cmd) return run_fit(fit_args, out, err);
    if (*score_cmd) return run_score(score_args, out);
    if (*sim_cmd) return run_simulate(sim_args, out);
    if (*pairs_cmd) return run_pairs(pairs_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace digestlab::cli

#include <cmath>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "digestlab/bifactor.hpp"
#include "digestlab/cli.hpp"
#include "digestlab/digestion.hpp"
#include "digestlab/error.hpp"
#include "digestlab/report.hpp"
#include "digestlab/select.hpp"
#include "digestlab/synth.hpp"

namespace py = pybind11;
using namespace digestlab;

namespace {

// Rows x items array of codes 1..6; NaN marks a missing answer.
ResponseMatrix to_responses(const Eigen::MatrixXd& data, std::vector<std::string> ids) {
  if (ids.empty()) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) ids.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(ids.size()) != data.cols()) throw InputError("item_ids length does not match columns");
  ResponseMatrix m(ids);
  std::vector<std::optional<int>> row(ids.size());
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      const double v = data(r, j);
      if (std::isnan(v)) {
        row[static_cast<std::size_t>(j)].reset();
      } else if (v != std::floor(v)) {
        throw InputError("row " + std::to_string(r + 1) + ": non-integer response");
      } else {
        row[static_cast<std::size_t>(j)] = static_cast<int>(v);
      }
    }
    m.add_row(row);
  }
  return m;
}

Eigen::MatrixXd to_array(const ResponseMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.items()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < m.items(); ++j) {
      const auto v = m.at(r, j);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v ? *v : std::nan("");
    }
  }
  return out;
}

py::dict weights_dict(const FactorWeightSet& w) {
  py::dict d;
  for (const auto& e : w.entries()) d[py::str(e.factor)] = e.weight;
  return d;
}

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_digestlab, m) {
  m.doc() = "Bifactor reliability and digestion-efficiency scoring";
  m.attr("__version__") = std::string(kToolVersion);

  const auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  m.def("builtin_weights", [](const std::string& media) { return weights_dict(builtin_weights(media)); },
        py::arg("media"), "Normalized factor weights of a built-in media preset (A, B, C or D).");

  m.def(
      "score",
      [](const py::object& weights, const std::map<std::string, double>& ev) {
        FactorWeightSet w;
        if (py::isinstance<py::str>(weights)) {
          w = builtin_weights(weights.cast<std::string>());
        } else {
          std::vector<FactorWeightSet::Entry> raw;
          for (const auto& [k, v] : weights.cast<py::dict>()) raw.push_back({k.cast<std::string>(), v.cast<double>()});
          w = FactorWeightSet("custom", std::move(raw));
        }
        const auto s = score(w, ev);
        py::dict out;
        out["rho"] = s.rho;
        out["contributions"] = s.contributions;
        return out;
      },
      py::arg("weights"), py::arg("ev"), "rho for a media label or a {factor: weight} dict.");

  m.def(
      "omegas",
      [](const Eigen::VectorXd& general, const Eigen::MatrixXd& group) {
        const auto sol = BifactorSolution::from_loadings(general, group);
        sol.validate();
        const auto o = omegas(sol);
        py::dict out;
        out["total"] = o.total;
        out["general"] = o.general;
        out["group"] = o.group;
        out["ecv"] = ecv(sol);
        return out;
      },
      py::arg("general"), py::arg("group"));

  m.def(
      "correlate",
      [](const Eigen::MatrixXd& data, const std::string& kind) {
        return correlate(to_responses(data, {}), parse_correlation_kind(kind)).values();
      },
      py::arg("data"), py::arg("kind") = "pearson", "Pairwise correlation of a rows x items code array.");

  m.def(
      "simulate",
      [](const Eigen::VectorXd& general, const Eigen::MatrixXd& group, std::size_t n, std::uint64_t seed, bool likert) {
        GeneratorSpec spec;
        spec.general = general;
        spec.group = group;
        spec.n = n;
        spec.seed = seed;
        return likert ? to_array(generate_likert(spec)) : generate_continuous(spec);
      },
      py::arg("general"), py::arg("group"), py::arg("n"), py::arg("seed") = cli::kDefaultSeed,
      py::arg("likert") = true);

  m.def(
      "extract_paf", [](const Eigen::MatrixXd& corr, int k) { return extract_paf(CorrelationMatrix(corr), k).loadings.values; },
      py::arg("corr"), py::arg("k"));

  m.def(
      "rotate_quartimin",
      [](const Eigen::MatrixXd& loadings, std::uint64_t seed) {
        RotationOptions opts;
        opts.seed = seed;
        const auto r = rotate_quartimin(LoadingMatrix{loadings}, opts);
        return py::make_tuple(r.pattern.values, r.phi);
      },
      py::arg("loadings"), py::arg("seed") = cli::kDefaultSeed, "Returns (pattern, phi).");

  m.def("second_order", &second_order, py::arg("phi"));

  m.def(
      "schmid_leiman",
      [](const Eigen::MatrixXd& pattern, const Eigen::MatrixXd& phi, const Eigen::VectorXd& gamma) {
        const auto sl = schmid_leiman(ObliqueSolution{LoadingMatrix{pattern}, phi}, gamma);
        py::dict out;
        out["general"] = sl.general;
        out["group"] = sl.group;
        out["uniqueness"] = sl.uniqueness;
        return out;
      },
      py::arg("pattern"), py::arg("phi"), py::arg("gamma"));

  m.def(
      "fit",
      [](const Eigen::MatrixXd& data, int k_min, int k_max, const std::string& corr, std::uint64_t seed,
         double min_group_omega, double max_dominance, std::vector<std::string> item_ids) {
        SelectionConfig config;
        config.k_min = k_min;
        config.k_max = k_max;
        config.corr_kind = parse_correlation_kind(corr);
        config.seed = seed;
        config.min_group_omega = min_group_omega;
        config.max_general_dominance = max_dominance;
        return parse_json(to_json(fit(to_responses(data, std::move(item_ids)), config, "python")).dump());
      },
      py::arg("data"), py::arg("k_min") = 2, py::arg("k_max") = 6, py::arg("corr") = "pearson",
      py::arg("seed") = cli::kDefaultSeed, py::arg("min_group_omega") = 0.1, py::arg("max_dominance") = 0.6,
      py::arg("item_ids") = std::vector<std::string>{}, "Full model selection; returns the report as a dict.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI command in-process; returns (exit_code, stdout, stderr).");
}

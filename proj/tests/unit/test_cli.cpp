#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "digestlab/cli.hpp"

namespace fs = std::filesystem;
using digestlab::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("digestlab-test-" + std::to_string(std::rand()) + "-" +
                                         std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Three groups of four items, general 0.4, group 0.6.
std::string clean_spec() {
  std::string group = "[";
  for (int j = 0; j < 12; ++j) {
    group += j ? "," : "";
    group += "[";
    for (int i = 0; i < 3; ++i) group += std::string(i ? "," : "") + (j / 4 == i ? "0.6" : "0");
    group += "]";
  }
  group += "]";
  return R"({"general":[0.4,0.4,0.4,0.4,0.4,0.4,0.4,0.4,0.4,0.4,0.4,0.4],"group":)" + group +
         R"(,"n":2000,"seed":12345})";
}

}  // namespace

TEST_CASE("simulate and fit") {
  TempDir dir;
  const auto spec = dir.write("spec.json", clean_spec());
  const auto data = dir.file("data.csv");

  auto sim = call({"simulate", "--spec", spec, "--likert", "--out", data});
  REQUIRE(sim.code == 0);
  const auto again = call({"simulate", "--spec", spec, "--likert"});
  CHECK(again.out == slurp(data));

  SUBCASE("chooses three groups") {
    const auto report_path = dir.file("report.json");
    const auto fit = call({"fit", "--responses", data, "--k-max", "5", "--out", report_path});
    CHECK(fit.code == 0);
    CHECK(fit.err.empty());
    const auto report = nlohmann::json::parse(slurp(report_path));
    CHECK(report["chosen_k"] == 3);
    CHECK(report["outcome"] == "model");
    CHECK(report["trace"].size() == 4);
    CHECK(report["seed"] == 12345);
    CHECK(report["model"]["weights"]["weights"].size() == 3);
  }
  SUBCASE("all rejected exits 2 with the trace") {
    const auto fit = call({"fit", "--responses", data, "--k-max", "3", "--max-dominance", "0.01"});
    CHECK(fit.code == 2);
    const auto report = nlohmann::json::parse(fit.out);
    CHECK(report["outcome"] == "no_model");
    CHECK(report["chosen_k"].is_null());
    CHECK(report["trace"].size() == 2);
    CHECK(fit.err.find("general-factor dominance") != std::string::npos);
  }
  SUBCASE("seed from the environment") {
    ::setenv("DIGESTLAB_SEED", "777", 1);
    const auto fit = call({"fit", "--responses", data, "--k-max", "2"});
    ::unsetenv("DIGESTLAB_SEED");
    CHECK(nlohmann::json::parse(fit.out)["seed"] == 777);
    const auto flagged = call({"fit", "--responses", data, "--k-max", "2", "--seed", "5"});
    CHECK(nlohmann::json::parse(flagged.out)["seed"] == 5);
  }
  SUBCASE("polychoric") {
    const auto fit = call({"fit", "--responses", data, "--k-max", "3", "--corr", "polychoric"});
    CHECK(fit.code == 0);
    CHECK(nlohmann::json::parse(fit.out)["correlation"] == "polychoric");
  }
  SUBCASE("continuous output has a header and 17-digit values") {
    const auto cont = call({"simulate", "--spec", spec, "--n", "3"});
    CHECK(cont.code == 0);
    CHECK(cont.out.rfind("x1,x2,", 0) == 0);
    CHECK(std::count(cont.out.begin(), cont.out.end(), '\n') == 4);
  }
}

TEST_CASE("fit input errors") {
  TempDir dir;
  const auto bad = dir.write("bad.csv", "a,b,c,d\n1,2,3,4\n1,2,x,4\n");
  const auto fit = call({"fit", "--responses", bad});
  CHECK(fit.code == 1);
  CHECK(fit.err.find("row 2") != std::string::npos);
  CHECK(call({"fit", "--responses", dir.file("missing.csv")}).code == 1);
  CHECK(call({"fit"}).code == 1);
  CHECK(call({}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("simulate rejects negative uniqueness") {
  TempDir dir;
  const auto spec = dir.write("spec.json", R"({"general":[0.9,0.9],"group":[[0.5],[0.5]],"n":10})");
  const auto sim = call({"simulate", "--spec", spec});
  CHECK(sim.code == 1);
  CHECK(sim.err.find("uniqueness") != std::string::npos);
}

TEST_CASE("score") {
  TempDir dir;
  const auto ev_d = dir.write("d.csv", "説明可能性,簡潔性\n1,0\n");
  const auto d = call({"score", "--media", "D", "--ev", ev_d});
  REQUIRE(d.code == 0);
  const auto j = nlohmann::json::parse(d.out);
  CHECK(std::abs(j["rho"].get<double>() - 0.557) <= 1e-12);
  CHECK(j["contributions"].size() == 2);

  const auto ev_b = dir.write("b.csv", "網羅性,簡潔性,結論へのアクセス性\n1,1,1\n");
  const auto b = call({"score", "--media", "B", "--ev", ev_b});
  CHECK(nlohmann::json::parse(b.out)["rho"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const auto ev_bad = dir.write("bad.csv", "網羅性,簡潔性,親密性\n1,1,1\n");
  const auto mismatch = call({"score", "--media", "B", "--ev", ev_bad});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("親密性") != std::string::npos);

  const auto w = dir.write("w.json", R"({"label":"custom","weights":{"a":1,"b":3}})");
  const auto ev_w = dir.write("w.csv", "a,b\n0,1\n0,0\n");
  const auto custom = call({"score", "--weights", w, "--ev", ev_w});
  CHECK(nlohmann::json::parse(custom.out)["rho"].get<double>() == doctest::Approx(0.375).epsilon(1e-15));

  CHECK(call({"score", "--ev", ev_d}).code == 1);
  CHECK(call({"score", "--media", "D", "--weights", w, "--ev", ev_d}).code == 1);
}

TEST_CASE("pairs") {
  TempDir dir;
  std::string csv;
  for (int j = 1; j <= 22; ++j) csv += (j > 1 ? "," : "") + std::string(j < 10 ? "q0" : "q") + std::to_string(j);
  csv += "\n";
  for (int r = 0; r < 12; ++r) {
    for (int j = 0; j < 22; ++j) csv += (j ? "," : "") + std::to_string(1 + (r * (j + 1) + j) % 6);
    csv += "\n";
  }
  const auto data = dir.write("resp.csv", csv);
  const auto p = call({"pairs", "--responses", data});
  REQUIRE(p.code == 0);
  CHECK(std::count(p.out.begin(), p.out.end(), '\n') == 12);
  CHECK(p.out.rfind("pair_id,first,second,n,r,deviation,error\np01,q01,q02,12,", 0) == 0);
}

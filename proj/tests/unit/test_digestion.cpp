#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "digestlab/digestion.hpp"
#include "digestlab/error.hpp"

using namespace digestlab;

namespace {

EvaluationSheet sheet(const std::string& text) {
  std::istringstream in(text);
  return parse_evaluation_sheet(in);
}

std::vector<double> weights_of(const FactorWeightSet& w) {
  std::vector<double> out;
  for (const auto& e : w.entries()) out.push_back(e.weight);
  return out;
}

}  // namespace

TEST_CASE("built-in media presets") {
  const auto d = builtin_weights("D");
  CHECK(d.entries()[0].factor == "説明可能性");
  CHECK(weights_of(d) == std::vector<double>{0.557, 0.443});
  CHECK(d.raw_sum() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(weights_of(builtin_weights("B")) == std::vector<double>{0.384, 0.312, 0.304});
  CHECK(weights_of(builtin_weights("C")) == std::vector<double>{0.279, 0.400, 0.321});

  const auto a = builtin_weights("A");
  CHECK(a.raw_sum() == doctest::Approx(1.010).epsilon(1e-14));
  const auto wa = weights_of(a);
  CHECK(wa[0] == doctest::Approx(0.272 / 1.010).epsilon(1e-15));
  CHECK(std::abs(wa[0] - 0.26931) < 5e-6);
  CHECK(std::abs(wa[1] - 0.35644) < 5e-6);
  CHECK(std::abs(wa[2] - 0.37426) < 5e-6);

  CHECK_THROWS_WITH_AS(builtin_weights("E"), doctest::Contains("unknown media label 'E'"), InputError);
}

TEST_CASE("weight set validation") {
  CHECK_THROWS_AS(FactorWeightSet("x", {}), InputError);
  CHECK_THROWS_AS(FactorWeightSet("x", {{"a", 0.5}, {"a", 0.5}}), InputError);
  CHECK_THROWS_AS(FactorWeightSet("x", {{"a", -0.1}, {"b", 1.1}}), InputError);
  CHECK_THROWS_AS(FactorWeightSet("x", {{"a", 0.0}, {"b", 0.0}}), InputError);
  const FactorWeightSet w("x", {{"a", 2.0}, {"b", 6.0}});
  CHECK(weights_of(w) == std::vector<double>{0.25, 0.75});
}

TEST_CASE("weights_from_report") {
  ReliabilityReport r;
  r.omega_group = Eigen::Vector2d(0.2, 0.2);
  const auto even = weights_from_report(r);
  CHECK(weights_of(even) == std::vector<double>{0.5, 0.5});
  CHECK(even.entries()[1].factor == "F2");

  r.omega_group = Eigen::Vector3d(0.279, 0.400, 0.321) * 0.37;
  const auto c = weights_from_report(r, {"親密性", "簡潔性", "未開拓性"});
  const auto wc = weights_of(c);
  CHECK(wc[0] == doctest::Approx(0.279).epsilon(1e-14));
  CHECK(wc[1] == doctest::Approx(0.400).epsilon(1e-14));
  CHECK(wc[2] == doctest::Approx(0.321).epsilon(1e-14));

  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd og(4);
    for (int i = 0; i < 4; ++i) og(i) = u(gen);
    r.omega_group = og;
    const auto base = weights_of(weights_from_report(r));
    r.omega_group = og * (10.0 * u(gen));
    const auto scaled = weights_of(weights_from_report(r));
    for (int i = 0; i < 4; ++i) CHECK(scaled[i] == doctest::Approx(base[i]).epsilon(1e-13));
  }

  r.omega_group = Eigen::Vector2d::Zero();
  CHECK_THROWS_AS(weights_from_report(r), InputError);
  r.omega_group = Eigen::Vector2d(0.1, 0.2);
  CHECK_THROWS_AS(weights_from_report(r, {"only"}), InputError);
}

TEST_CASE("evaluation sheets") {
  const auto one = average_evaluations(sheet("a,b\n0.25,1\n"));
  CHECK(one.at("a") == 0.25);
  CHECK(one.at("b") == 1.0);

  const auto two = average_evaluations(sheet("a,b\n0.2,0\n0.4,1\n"));
  CHECK(two.at("a") == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(two.at("b") == 0.5);

  CHECK_THROWS_WITH_AS(sheet("a,b\n1.2,0\n"), doctest::Contains("[0, 1]"), InputError);
  CHECK_THROWS_AS(sheet("a,b\n"), InputError);
  CHECK_THROWS_AS(sheet(""), InputError);
  CHECK_THROWS_AS(sheet("a,a\n0,0\n"), InputError);
  CHECK_THROWS_WITH_AS(sheet("a,b\n0.1,0.2\nx,0\n"), doctest::Contains("row 2"), InputError);
}

TEST_CASE("weight set files") {
  const auto obj = parse_weight_set(R"({"label": "mine", "weights": {"x": 1, "y": 3}})");
  CHECK(obj.label() == "mine");
  CHECK(obj.entries().size() == 2);
  const auto arr = parse_weight_set(R"({"label": "mine", "weights": [{"factor": "y", "weight": 3}, {"factor": "x", "weight": 1}]})");
  CHECK(arr.entries()[0].factor == "y");
  CHECK(arr.entries()[0].weight == 0.75);
  CHECK_THROWS_AS(parse_weight_set(R"({"label": "mine"})"), InputError);
  CHECK_THROWS_AS(parse_weight_set("nope"), InputError);
}

TEST_CASE("score") {
  const auto d = builtin_weights("D");
  const auto r = score(d, {{"説明可能性", 1.0}, {"簡潔性", 0.0}});
  CHECK(std::abs(r.rho - 0.557) <= 1e-12);
  REQUIRE(r.contributions.size() == 2);
  CHECK(r.contributions[0].first == "説明可能性");
  CHECK(r.contributions[0].second == 0.557);

  const auto b = builtin_weights("B");
  CHECK(score(b, {{"網羅性", 1}, {"簡潔性", 1}, {"結論へのアクセス性", 1}}).rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(score(b, {{"網羅性", 0.5}, {"簡潔性", 0.5}, {"結論へのアクセス性", 0.5}}).rho ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(score(b, {{"網羅性", 1}, {"簡潔性", 1}, {"親密性", 1}}), doctest::Contains("親密性"), InputError);
  CHECK_THROWS_AS(score(b, {{"網羅性", 1}, {"簡潔性", 1}}), InputError);
  CHECK_THROWS_AS(score(b, {{"網羅性", 1.5}, {"簡潔性", 1}, {"結論へのアクセス性", 1}}), InputError);
}

TEST_CASE("score properties on random inputs") {
  std::mt19937 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 5;
    std::vector<FactorWeightSet::Entry> raw;
    std::map<std::string, double> ev;
    for (int i = 0; i < k; ++i) {
      const std::string name = "f" + std::to_string(i);
      raw.push_back({name, u(gen) + 1e-3});
      ev[name] = u(gen);
    }
    const FactorWeightSet w("r", raw);
    const auto s = score(w, ev);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (const auto& [name, v] : ev) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (const auto& [name, c] : s.contributions) sum += c;
    CHECK(s.rho >= lo - 1e-12);
    CHECK(s.rho <= hi + 1e-12);
    CHECK(std::abs(s.rho - sum) <= 1e-12);

    // Raising one component never lowers rho.
    auto bumped = ev;
    const std::string name = "f" + std::to_string(static_cast<int>(gen() % static_cast<unsigned>(k)));
    bumped[name] = std::min(1.0, bumped[name] + u(gen));
    CHECK(score(w, bumped).rho >= s.rho - 1e-15);

    // The order of entries in the weight set does not change rho.
    std::reverse(raw.begin(), raw.end());
    CHECK(score(FactorWeightSet("r", raw), ev).rho == doctest::Approx(s.rho).epsilon(1e-14));
  }
}

TEST_CASE("sheet column order does not matter") {
  const auto a = builtin_weights("A");
  const auto x = score(a, average_evaluations(sheet("未開拓性,簡潔性,親密性\n0.1,0.5,0.9\n")));
  const auto y = score(a, average_evaluations(sheet("親密性,未開拓性,簡潔性\n0.9,0.1,0.5\n")));
  CHECK(x.rho == y.rho);
}

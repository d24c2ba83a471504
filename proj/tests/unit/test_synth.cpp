#include <array>
#include <cmath>

#include "doctest.h"
#include "digestlab/error.hpp"
#include "digestlab/synth.hpp"
#include "support/oracles.hpp"

using namespace digestlab;

namespace {

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

GeneratorSpec spec_of(const oracle::Structure& s, std::size_t n, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.general = s.general;
  spec.group = s.group;
  spec.n = n;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generate_continuous") {
  SUBCASE("deterministic") {
    const auto spec = spec_of(oracle::block_bifactor(6, 2, 0.5, 0.4), 100, 42);
    CHECK(generate_continuous(spec) == generate_continuous(spec));
    auto other = spec;
    other.seed = 43;
    CHECK(generate_continuous(other) != generate_continuous(spec));
  }
  SUBCASE("zero loadings are uncorrelated") {
    const auto x = generate_continuous(spec_of(oracle::block_bifactor(6, 2, 0.0, 0.0), 2000, 1));
    for (Eigen::Index a = 0; a < 6; ++a) {
      for (Eigen::Index b = a + 1; b < 6; ++b) CHECK(std::abs(oracle::pearson(column(x, a), column(x, b))) < 0.07);
    }
  }
  SUBCASE("general loading 0.5 implies r = 0.25") {
    const auto x = generate_continuous(spec_of(oracle::block_bifactor(6, 2, 0.5, 0.0), 2000, 2));
    for (Eigen::Index a = 0; a < 6; ++a) {
      for (Eigen::Index b = a + 1; b < 6; ++b) CHECK(std::abs(oracle::pearson(column(x, a), column(x, b)) - 0.25) < 0.06);
    }
  }
  SUBCASE("sample correlations approach the implied structure") {
    const auto s = oracle::block_bifactor(6, 2, 0.5, 0.4);
    const auto x = generate_continuous(spec_of(s, 2000, 3));
    const auto target = oracle::bifactor_correlation(s.general, s.group);
    for (Eigen::Index a = 0; a < 6; ++a) {
      for (Eigen::Index b = a + 1; b < 6; ++b) {
        CHECK(std::abs(oracle::pearson(column(x, a), column(x, b)) - target(a, b)) < 0.06);
      }
    }
  }
  SUBCASE("negative uniqueness is rejected") {
    GeneratorSpec spec;
    spec.general = Eigen::VectorXd::Constant(4, 0.9);
    spec.group = Eigen::MatrixXd::Constant(4, 1, 0.5);
    spec.n = 10;
    CHECK_THROWS_WITH_AS(generate_continuous(spec), doctest::Contains("uniqueness"), InputError);
  }
}

TEST_CASE("generate_likert") {
  const auto spec = spec_of(oracle::block_bifactor(6, 2, 0.5, 0.4), 6000, 9);
  const auto m = generate_likert(spec);
  CHECK(m == generate_likert(spec));
  CHECK(m.item_ids() == std::vector<std::string>{"x1", "x2", "x3", "x4", "x5", "x6"});
  std::array<int, 7> counts{};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < m.items(); ++j) {
      const auto v = m.at(r, j);
      REQUIRE(v.has_value());
      CHECK(*v >= 1);
      CHECK(*v <= 6);
      ++counts[static_cast<std::size_t>(*v)];
    }
  }
  const double total = static_cast<double>(m.rows() * m.items());
  for (int c = 1; c <= 6; ++c) CHECK(std::abs(counts[static_cast<std::size_t>(c)] / total - 1.0 / 6.0) < 0.03);
}

TEST_CASE("thresholds") {
  const auto eq = threshold_preset(ThresholdPreset::equiprobable);
  CHECK(eq[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(oracle::Phi(eq[0]) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(oracle::Phi(eq[4]) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  const auto low = threshold_preset(ThresholdPreset::skewed_low);
  const auto high = threshold_preset(ThresholdPreset::skewed_high);
  for (std::size_t i = 0; i < 5; ++i) CHECK(high[i] == doctest::Approx(-low[4 - i]).epsilon(1e-12));
  CHECK(oracle::Phi(low[0]) == doctest::Approx(0.30).epsilon(1e-12));

  for (double x = -4.0; x < 4.0; x += 0.01) CHECK(discretize(x, eq) <= discretize(x + 0.01, eq));
  CHECK(discretize(-10.0, eq) == 1);
  CHECK(discretize(10.0, eq) == 6);

  GeneratorSpec spec;
  spec.general = Eigen::VectorXd::Constant(2, 0.5);
  spec.group = Eigen::MatrixXd::Zero(2, 1);
  spec.thresholds = {Thresholds{0, 1, 1, 2, 3}};
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec.thresholds = {Thresholds{-1, 0, 1, 2, 3}, Thresholds{-1, 0, 1, 2, 3}, Thresholds{-1, 0, 1, 2, 3}};
  CHECK_THROWS_AS(spec.validate(), InputError);
}

TEST_CASE("generator spec JSON") {
  const auto spec = parse_generator_spec(R"({"general":[0.5,0.5,0.5,0.5],
      "group":[[0.4,0],[0.4,0],[0,0.4],[0,0.4]],"n":50,"seed":7,
      "item_ids":["a","b","c","d"]})");
  CHECK(spec.items() == 4);
  CHECK(spec.n == 50);
  CHECK(spec.seed == 7);
  CHECK(spec.uniqueness()(0) == doctest::Approx(0.59).epsilon(1e-14));
  CHECK(generate_likert(spec).item_ids() == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK_THROWS_AS(parse_generator_spec(R"({"general":[0.5],"group":[[0.4],[0.4]]})"), InputError);
  CHECK_THROWS_AS(parse_generator_spec(R"({"group":[[0.4]]})"), InputError);
}

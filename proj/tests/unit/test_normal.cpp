#include <cmath>
#include <limits>

#include "doctest.h"
#include "digestlab/normal.hpp"
#include "support/oracles.hpp"

using namespace digestlab;

TEST_CASE("quantile inverts cdf") {
  for (double p : {1e-12, 1e-6, 0.001, 0.02, 0.1, 0.3, 0.5, 0.7, 0.95, 0.999, 1 - 1e-9}) {
    CHECK(normal::cdf(normal::quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(normal::quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal::quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(std::isinf(normal::quantile(0.0)));
  CHECK(std::isinf(normal::quantile(1.0)));
}

TEST_CASE("bivariate cdf agrees with Simpson quadrature") {
  const double hs[] = {-2.5, -1.0, -0.2, 0.0, 0.4, 1.3, 2.2};
  const double rs[] = {-0.999, -0.95, -0.8, -0.5, -0.2, 0.1, 0.3, 0.6, 0.9, 0.93, 0.99, 0.999};
  double worst = 0.0;
  for (double h : hs) {
    for (double k : hs) {
      for (double r : rs) {
        const double expected = oracle::bivariate_cdf(h, k, r);
        worst = std::max(worst, std::abs(normal::bivariate_cdf(h, k, r) - expected));
      }
    }
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("bivariate cdf limits") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(normal::bivariate_cdf(-inf, 0.3, 0.5) == 0.0);
  CHECK(normal::bivariate_cdf(inf, 0.3, 0.5) == doctest::Approx(normal::cdf(0.3)));
  CHECK(normal::bivariate_cdf(0.7, inf, -0.5) == doctest::Approx(normal::cdf(0.7)));
  CHECK(normal::bivariate_cdf(inf, inf, 0.2) == 1.0);
  CHECK(normal::bivariate_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25));
  // Orthant probability 1/4 + asin(r) / (2 pi).
  for (double r : {-0.9, -0.3, 0.5, 0.95}) {
    CHECK(normal::bivariate_cdf(0.0, 0.0, r) ==
          doctest::Approx(0.25 + std::asin(r) / (2.0 * std::numbers::pi)).epsilon(1e-12));
  }
}

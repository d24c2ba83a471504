#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "digestlab/instrument.hpp"

namespace digestlab {

// Symmetric p x p correlation matrix with unit diagonal and entries in [-1, 1].
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  // Validates the invariants; throws InputError on violation.
  explicit CorrelationMatrix(Eigen::MatrixXd values);

  static CorrelationMatrix identity(Eigen::Index p);

  Eigen::Index size() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Eigen::MatrixXd values_;
};

enum class CorrelationKind { pearson, polychoric };

std::string_view to_string(CorrelationKind kind);
CorrelationKind parse_correlation_kind(std::string_view name);

// Product-moment correlation over rows where both values are present (NaN =
// missing). Throws InputError with fewer than 3 such rows or zero variance.
double pearson_pair(std::span<const double> x, std::span<const double> y);

// Pairwise-deletion Pearson matrix.
CorrelationMatrix pearson(const ResponseMatrix& responses);

struct PolychoricOptions {
  double bound = 0.999;  // search interval is [-bound, bound]
  double tol = 1e-6;
  int max_iter = 200;
};

// Two-step polychoric estimate for one pair of ordinal columns: thresholds
// from the marginal proportions, then a golden-section ML search over rho.
// Rows with either value missing are dropped.
double polychoric_pair(std::span<const std::optional<int>> x,
                       std::span<const std::optional<int>> y,
                       const PolychoricOptions& options = {});

CorrelationMatrix polychoric(const ResponseMatrix& responses,
                             const PolychoricOptions& options = {});

CorrelationMatrix correlate(const ResponseMatrix& responses, CorrelationKind kind);

// Squared multiple correlations 1 - 1/(R^-1)_jj, clamped into [0, 1).
Eigen::VectorXd smc(const CorrelationMatrix& corr);

}  // namespace digestlab

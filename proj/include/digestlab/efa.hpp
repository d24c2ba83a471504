#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "digestlab/corr.hpp"

namespace digestlab {

// Communality ceiling used for Heywood cases.
inline constexpr double kMaxCommunality = 0.998;

struct LoadingMatrix {
  Eigen::MatrixXd values;  // items x factors

  Eigen::Index items() const { return values.rows(); }
  Eigen::Index factors() const { return values.cols(); }
  Eigen::VectorXd communalities() const { return values.rowwise().squaredNorm(); }
};

struct ObliqueSolution {
  LoadingMatrix pattern;
  Eigen::MatrixXd phi;  // factor correlations
};

// General factor plus k orthogonal group factors.
struct BifactorSolution {
  Eigen::VectorXd general;     // lambda_g, length p
  Eigen::MatrixXd group;       // p x k
  Eigen::VectorXd uniqueness;  // psi, length p

  Eigen::Index items() const { return general.size(); }
  Eigen::Index group_factors() const { return group.cols(); }

  // Checks dimensions and psi_j = 1 - communality_j within [0, 1];
  // throws InputError otherwise.
  void validate() const;

  // Builds a solution with psi = 1 - communality.
  static BifactorSolution from_loadings(Eigen::VectorXd general, Eigen::MatrixXd group);
};

struct PafOptions {
  double tol = 1e-6;
  int max_iter = 200;
};

struct PafResult {
  LoadingMatrix loadings;
  int iterations = 0;
  std::vector<Eigen::Index> heywood_items;  // items whose communality hit the ceiling
};

// Iterated principal-axis factoring from SMC starting communalities.
// Requires 1 <= k <= p/2. Throws ConvergenceError when max_iter is exhausted.
PafResult extract_paf(const CorrelationMatrix& corr, int k, const PafOptions& options = {});

// Sum over items and ordered factor pairs a != b of l_ja^2 l_jb^2.
double quartimin_criterion(const Eigen::MatrixXd& loadings);

struct RotationOptions {
  double tol = 1e-6;
  int max_iter = 500;
  int random_starts = 10;  // in addition to the identity start
  std::uint64_t seed = 0;
};

// Oblique quartimin rotation by gradient projection. Columns of the result
// are ordered by decreasing sum of squared loadings and sign-aligned.
// Throws ConfigError for k < 2 and ConvergenceError if no start converges.
ObliqueSolution rotate_quartimin(const LoadingMatrix& loadings,
                                 const RotationOptions& options = {});

// Loadings of the first-order factors on a single second-order factor,
// each clamped to [0, 0.999].
Eigen::VectorXd second_order(const Eigen::MatrixXd& phi);

// general = pattern * gamma, group = pattern * diag(sqrt(1 - gamma^2)),
// uniqueness = 1 - communality. Rows whose communality exceeds the Heywood
// ceiling are scaled down to it and reported through clamped_items.
BifactorSolution schmid_leiman(const ObliqueSolution& oblique, const Eigen::VectorXd& gamma,
                               std::vector<Eigen::Index>* clamped_items = nullptr);

// Flip every column whose sum is negative. Returns the flip signs (+1/-1).
Eigen::VectorXd align_column_signs(Eigen::MatrixXd& loadings);

}  // namespace digestlab

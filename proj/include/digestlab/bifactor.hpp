#pragma once

#include <Eigen/Dense>

#include "digestlab/corr.hpp"
#include "digestlab/efa.hpp"

namespace digestlab {

struct ReliabilityReport {
  int k = 0;  // group factors
  double omega_total = 0.0;
  double omega_general = 0.0;
  Eigen::VectorXd omega_group;
  double ecv = 0.0;
  double rmsr = 0.0;
};

struct Omegas {
  double total = 0.0;
  double general = 0.0;
  Eigen::VectorXd group;
};

// Additive decomposition of total-score variance:
//   V = (sum lambda_g)^2 + sum_i (sum lambda_i)^2 + sum psi
//   omega_general = (sum lambda_g)^2 / V, omega_group(i) = (sum lambda_i)^2 / V,
//   omega_total = omega_general + sum_i omega_group(i).
Omegas omegas(const BifactorSolution& solution);

// Share of common variance carried by the general factor.
// Throws UndefinedError when every loading is zero.
double ecv(const BifactorSolution& solution);

Eigen::MatrixXd implied_correlation(const BifactorSolution& solution);

// Root mean square of the off-diagonal residuals (upper triangle).
double rmsr(const CorrelationMatrix& observed, const BifactorSolution& solution);

// omegas + ecv + rmsr in one report. ecv is 0 for an all-zero solution.
ReliabilityReport reliability(const CorrelationMatrix& observed,
                              const BifactorSolution& solution);

}  // namespace digestlab

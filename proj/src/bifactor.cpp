#include "digestlab/bifactor.hpp"

#include <cmath>
#include <string>

#include "digestlab/error.hpp"

namespace digestlab {

Omegas omegas(const BifactorSolution& solution) {
  const Eigen::Index k = solution.group_factors();
  const double general_sq = std::pow(solution.general.sum(), 2);
  Eigen::VectorXd group_sq(k);
  for (Eigen::Index i = 0; i < k; ++i) group_sq(i) = std::pow(solution.group.col(i).sum(), 2);
  const double common = general_sq + group_sq.sum();
  const double total_variance = common + solution.uniqueness.sum();

  Omegas out;
  out.group = Eigen::VectorXd::Zero(k);
  if (total_variance <= 0.0) return out;
  out.general = general_sq / total_variance;
  out.group = group_sq / total_variance;
  out.total = out.general + out.group.sum();
  return out;
}

double ecv(const BifactorSolution& solution) {
  const double general = solution.general.squaredNorm();
  const double group = solution.group.squaredNorm();
  if (general + group == 0.0) throw UndefinedError("ecv: every loading is zero");
  return general / (general + group);
}

Eigen::MatrixXd implied_correlation(const BifactorSolution& solution) {
  Eigen::MatrixXd r = solution.general * solution.general.transpose();
  r += solution.group * solution.group.transpose();
  r.diagonal() += solution.uniqueness;
  return r;
}

double rmsr(const CorrelationMatrix& observed, const BifactorSolution& solution) {
  const Eigen::Index p = observed.size();
  if (solution.items() != p) {
    throw InputError("rmsr: observed matrix has " + std::to_string(p) + " items, model has " +
                     std::to_string(solution.items()));
  }
  if (p < 2) return 0.0;
  const Eigen::MatrixXd implied = implied_correlation(solution);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double d = observed(i, j) - implied(i, j);
      sum += d * d;
    }
  }
  return std::sqrt(sum / (static_cast<double>(p) * (p - 1) / 2.0));
}

ReliabilityReport reliability(const CorrelationMatrix& observed, const BifactorSolution& solution) {
  const auto om = omegas(solution);
  ReliabilityReport report;
  report.k = static_cast<int>(solution.group_factors());
  report.omega_total = om.total;
  report.omega_general = om.general;
  report.omega_group = om.group;
  const double common = solution.general.squaredNorm() + solution.group.squaredNorm();
  report.ecv = common > 0.0 ? ecv(solution) : 0.0;
  report.rmsr = rmsr(observed, solution);
  return report;
}

}  // namespace digestlab

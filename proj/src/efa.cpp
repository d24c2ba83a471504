#include "digestlab/efa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "digestlab/error.hpp"
#include "digestlab/random.hpp"

namespace digestlab {

void BifactorSolution::validate() const {
  const auto p = general.size();
  if (group.rows() != p || uniqueness.size() != p) {
    throw InputError("bifactor solution: inconsistent dimensions");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    const double communality = general(j) * general(j) + group.row(j).squaredNorm();
    if (uniqueness(j) < -1e-12 || uniqueness(j) > 1.0 + 1e-12) {
      throw InputError("bifactor solution: uniqueness of item " + std::to_string(j) + " outside [0, 1]");
    }
    if (std::abs(communality + uniqueness(j) - 1.0) > 1e-8) {
      throw InputError("bifactor solution: item " + std::to_string(j) +
                       " communality and uniqueness do not sum to 1");
    }
  }
}

BifactorSolution BifactorSolution::from_loadings(Eigen::VectorXd general, Eigen::MatrixXd group) {
  BifactorSolution s;
  s.uniqueness = Eigen::VectorXd::Ones(general.size()) - general.cwiseAbs2() - group.rowwise().squaredNorm();
  s.general = std::move(general);
  s.group = std::move(group);
  return s;
}

Eigen::VectorXd align_column_signs(Eigen::MatrixXd& loadings) {
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(loadings.cols());
  for (Eigen::Index c = 0; c < loadings.cols(); ++c) {
    if (loadings.col(c).sum() < 0.0) {
      loadings.col(c) *= -1.0;
      signs(c) = -1.0;
    }
  }
  return signs;
}

// ---------------------------------------------------------------------------
// Principal-axis factoring

namespace {

struct PafState {
  PafResult result;
  bool converged = false;
};

PafState run_paf(const CorrelationMatrix& corr, int k, const PafOptions& options) {
  const Eigen::Index p = corr.size();
  Eigen::VectorXd h = smc(corr).cwiseMin(kMaxCommunality);
  Eigen::MatrixXd reduced = corr.values();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

  PafState state;
  Eigen::MatrixXd loadings(p, k);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    reduced.diagonal() = h;
    eig.compute(reduced);
    // Eigenvalues come back ascending; take the top k in descending order.
    for (int f = 0; f < k; ++f) {
      const Eigen::Index idx = p - 1 - f;
      loadings.col(f) = eig.eigenvectors().col(idx) * std::sqrt(std::max(eig.eigenvalues()(idx), 0.0));
    }
    Eigen::VectorXd next = loadings.rowwise().squaredNorm();
    next = next.cwiseMin(kMaxCommunality);
    const double change = (next - h).cwiseAbs().maxCoeff();
    h = next;
    state.result.iterations = iter;
    if (change < options.tol) {
      state.converged = true;
      break;
    }
  }

  state.result.heywood_items.clear();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double c = loadings.row(j).squaredNorm();
    if (c > kMaxCommunality) {
      loadings.row(j) *= std::sqrt(kMaxCommunality / c);
      state.result.heywood_items.push_back(j);
    }
  }
  align_column_signs(loadings);
  state.result.loadings.values = std::move(loadings);
  return state;
}

}  // namespace

PafResult extract_paf(const CorrelationMatrix& corr, int k, const PafOptions& options) {
  if (k < 1 || 2 * static_cast<Eigen::Index>(k) > corr.size()) {
    throw ConfigError("extract_paf: factor count " + std::to_string(k) + " outside 1.." +
                      std::to_string(corr.size() / 2));
  }
  auto state = run_paf(corr, k, options);
  if (!state.converged) {
    throw ConvergenceError("extract_paf: no convergence after " + std::to_string(options.max_iter) +
                           " iterations (k = " + std::to_string(k) + ")");
  }
  return std::move(state.result);
}

// ---------------------------------------------------------------------------
// Quartimin rotation

double quartimin_criterion(const Eigen::MatrixXd& loadings) {
  const Eigen::MatrixXd sq = loadings.cwiseAbs2();
  double q = 0.0;
  for (Eigen::Index j = 0; j < sq.rows(); ++j) {
    const double s = sq.row(j).sum();
    q += s * s - sq.row(j).squaredNorm();
  }
  return q;
}

namespace {

// Quartimin objective Q/4 and its gradient in L: with N = ones - I,
// f = sum(L2 .* (L2 N)) / 4 and df/dL = L .* (L2 N).
double quartimin_value(const Eigen::MatrixXd& l, Eigen::MatrixXd& gradient) {
  const Eigen::MatrixXd l2 = l.cwiseAbs2();
  const Eigen::Index k = l.cols();
  const Eigen::MatrixXd off = Eigen::MatrixXd::Ones(k, k) - Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd x = l2 * off;
  gradient = l.cwiseProduct(x);
  return l2.cwiseProduct(x).sum() / 4.0;
}

struct GpaOutcome {
  Eigen::MatrixXd pattern;
  Eigen::MatrixXd t;
  bool converged = false;
};

// Oblique gradient projection: pattern = A * inv(T)', phi = T'T, T with unit columns.
GpaOutcome gpa_oblique(const Eigen::MatrixXd& a, Eigen::MatrixXd t, const RotationOptions& options) {
  GpaOutcome out;
  Eigen::MatrixXd t_inv = t.inverse();
  Eigen::MatrixXd l = a * t_inv.transpose();
  Eigen::MatrixXd gq;
  double f = quartimin_value(l, gq);
  Eigen::MatrixXd g = -(l.transpose() * gq * t_inv).transpose();
  double alpha = 1.0;

  for (int iter = 0; iter <= options.max_iter; ++iter) {
    const Eigen::RowVectorXd col_dots = t.cwiseProduct(g).colwise().sum();
    const Eigen::MatrixXd gp = g - t * col_dots.asDiagonal();
    const double s = gp.norm();
    if (s < options.tol) {
      out.converged = true;
      break;
    }
    if (iter == options.max_iter) break;

    alpha *= 2.0;
    Eigen::MatrixXd t_new;
    Eigen::MatrixXd l_new;
    Eigen::MatrixXd gq_new;
    double f_new = f;
    for (int half = 0; half <= 10; ++half) {
      Eigen::MatrixXd x = t - alpha * gp;
      const Eigen::RowVectorXd norms = x.colwise().norm();
      t_new = x * norms.cwiseInverse().asDiagonal();
      l_new = a * t_new.inverse().transpose();
      f_new = quartimin_value(l_new, gq_new);
      if (f - f_new > 0.5 * s * s * alpha) break;
      alpha /= 2.0;
    }
    t = std::move(t_new);
    l = std::move(l_new);
    gq = std::move(gq_new);
    f = f_new;
    t_inv = t.inverse();
    g = -(l.transpose() * gq * t_inv).transpose();
  }
  out.pattern = std::move(l);
  out.t = std::move(t);
  return out;
}

Eigen::MatrixXd random_orthonormal(Eigen::Index k, NormalStream& rng) {
  Eigen::MatrixXd z(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < k; ++r) z(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  // Fix the sign ambiguity of QR so the draw is Haar-distributed.
  const Eigen::MatrixXd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < k; ++c) {
    if (rmat(c, c) < 0.0) q.col(c) *= -1.0;
  }
  return q;
}

}  // namespace

ObliqueSolution rotate_quartimin(const LoadingMatrix& loadings, const RotationOptions& options) {
  const Eigen::Index k = loadings.factors();
  if (k < 2) throw ConfigError("rotate_quartimin: rotation needs at least 2 factors");

  NormalStream rng(options.seed);
  std::optional<GpaOutcome> best;
  double best_q = std::numeric_limits<double>::infinity();
  for (int start = 0; start <= options.random_starts; ++start) {
    Eigen::MatrixXd t0 = start == 0 ? Eigen::MatrixXd::Identity(k, k) : random_orthonormal(k, rng);
    auto outcome = gpa_oblique(loadings.values, std::move(t0), options);
    if (!outcome.converged) continue;
    const double q = quartimin_criterion(outcome.pattern);
    // Strict comparison keeps the earliest start on ties.
    if (q < best_q) {
      best_q = q;
      best = std::move(outcome);
    }
  }
  if (!best) {
    throw ConvergenceError("rotate_quartimin: no start converged within " +
                           std::to_string(options.max_iter) + " iterations");
  }

  Eigen::MatrixXd pattern = best->pattern;
  Eigen::MatrixXd phi = best->t.transpose() * best->t;

  // Order factors by explained variance, then align signs.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::VectorXd ss = pattern.colwise().squaredNorm();
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return ss(x) > ss(y); });

  ObliqueSolution out;
  out.pattern.values.resize(pattern.rows(), k);
  out.phi.resize(k, k);
  for (Eigen::Index c = 0; c < k; ++c) out.pattern.values.col(c) = pattern.col(order[c]);
  const Eigen::VectorXd signs = align_column_signs(out.pattern.values);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const double v = 0.5 * (phi(order[a], order[b]) + phi(order[b], order[a]));
      out.phi(a, b) = a == b ? 1.0 : std::clamp(signs(a) * signs(b) * v, -1.0, 1.0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second-order factor and Schmid-Leiman transformation

Eigen::VectorXd second_order(const Eigen::MatrixXd& phi) {
  const Eigen::Index k = phi.rows();
  if (k < 2 || phi.cols() != k) throw ConfigError("second_order: need a square phi with k >= 2");
  constexpr double kMaxGamma = 0.999;

  Eigen::VectorXd gamma(k);
  if (k == 2) {
    gamma.setConstant(std::sqrt(std::max(phi(0, 1), 0.0)));
  } else {
    Eigen::MatrixXd sym = 0.5 * (phi + phi.transpose());
    sym.diagonal().setOnes();
    // A tiny k x k problem: iterate hard and accept the last iterate.
    auto state = run_paf(CorrelationMatrix(std::move(sym)), 1, PafOptions{1e-12, 20000});
    gamma = state.result.loadings.values.col(0);
  }
  return gamma.cwiseMax(0.0).cwiseMin(kMaxGamma);
}

BifactorSolution schmid_leiman(const ObliqueSolution& oblique, const Eigen::VectorXd& gamma,
                               std::vector<Eigen::Index>* clamped_items) {
  const auto& pattern = oblique.pattern.values;
  if (pattern.cols() != gamma.size()) {
    throw InputError("schmid_leiman: pattern has " + std::to_string(pattern.cols()) +
                     " factors but gamma has " + std::to_string(gamma.size()));
  }
  Eigen::VectorXd general = pattern * gamma;
  const Eigen::VectorXd residual = (Eigen::VectorXd::Ones(gamma.size()) - gamma.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd group = pattern * residual.asDiagonal();

  if (clamped_items) clamped_items->clear();
  for (Eigen::Index j = 0; j < pattern.rows(); ++j) {
    const double c = general(j) * general(j) + group.row(j).squaredNorm();
    if (c > kMaxCommunality) {
      const double scale = std::sqrt(kMaxCommunality / c);
      general(j) *= scale;
      group.row(j) *= scale;
      if (clamped_items) clamped_items->push_back(j);
    }
  }
  return BifactorSolution::from_loadings(std::move(general), std::move(group));
}

}  // namespace digestlab

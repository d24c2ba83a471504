#include "digestlab/corr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "digestlab/error.hpp"
#include "digestlab/normal.hpp"

namespace digestlab {

namespace {

constexpr double kSymmetryTol = 1e-12;

std::string pair_label(const ResponseMatrix& responses, std::size_t a, std::size_t b) {
  return "'" + responses.item_ids()[a] + "' / '" + responses.item_ids()[b] + "'";
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw InputError("correlation matrix is not square");
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    if (!std::isfinite(values_(i, i)) || std::abs(values_(i, i) - 1.0) > kSymmetryTol) {
      throw InputError("correlation matrix diagonal entry " + std::to_string(i) + " is not 1");
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      const double a = values_(i, j);
      const double b = values_(j, i);
      if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("correlation matrix has non-finite entries");
      if (std::abs(a - b) > kSymmetryTol) throw InputError("correlation matrix is not symmetric");
      if (std::abs(a) > 1.0 + kSymmetryTol) throw InputError("correlation entry outside [-1, 1]");
    }
  }
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index p) {
  return CorrelationMatrix(Eigen::MatrixXd::Identity(p, p));
}

std::string_view to_string(CorrelationKind kind) {
  return kind == CorrelationKind::pearson ? "pearson" : "polychoric";
}

CorrelationKind parse_correlation_kind(std::string_view name) {
  if (name == "pearson") return CorrelationKind::pearson;
  if (name == "polychoric") return CorrelationKind::polychoric;
  throw ConfigError("unknown correlation kind '" + std::string(name) + "'");
}

double pearson_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("pearson: columns differ in length");
  double mx = 0.0;
  double my = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    mx += x[i];
    my += y[i];
    ++n;
  }
  if (n < 3) {
    throw InputError("insufficient overlap: " + std::to_string(n) + " jointly observed rows (need 3)");
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InputError("constant column on the jointly observed rows");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix pearson(const ResponseMatrix& responses) {
  const auto p = static_cast<Eigen::Index>(responses.items());
  std::vector<std::vector<double>> columns;
  columns.reserve(responses.items());
  for (std::size_t j = 0; j < responses.items(); ++j) columns.push_back(responses.column(j));

  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = a + 1; b < p; ++b) {
      try {
        r(a, b) = r(b, a) = pearson_pair(columns[a], columns[b]);
      } catch (const InputError& e) {
        throw InputError("pearson " + pair_label(responses, a, b) + ": " + e.what());
      }
    }
  }
  return CorrelationMatrix(std::move(r));
}

namespace {

struct OrdinalMargins {
  std::vector<int> categories;    // observed codes, ascending
  std::vector<double> cuts;       // -inf, tau_1 .. tau_{m-1}, +inf
};

OrdinalMargins margins(const std::vector<int>& values) {
  OrdinalMargins m;
  m.categories = values;
  std::sort(m.categories.begin(), m.categories.end());
  m.categories.erase(std::unique(m.categories.begin(), m.categories.end()), m.categories.end());
  if (m.categories.size() < 2) throw InputError("constant column (fewer than 2 observed categories)");

  std::vector<std::size_t> counts(m.categories.size(), 0);
  for (int v : values) {
    const auto it = std::lower_bound(m.categories.begin(), m.categories.end(), v);
    ++counts[static_cast<std::size_t>(it - m.categories.begin())];
  }
  const double n = static_cast<double>(values.size());
  m.cuts.push_back(-std::numeric_limits<double>::infinity());
  std::size_t cumulative = 0;
  for (std::size_t c = 0; c + 1 < counts.size(); ++c) {
    cumulative += counts[c];
    m.cuts.push_back(normal::quantile(static_cast<double>(cumulative) / n));
  }
  m.cuts.push_back(std::numeric_limits<double>::infinity());
  return m;
}

std::size_t category_index(const OrdinalMargins& m, int v) {
  return static_cast<std::size_t>(std::lower_bound(m.categories.begin(), m.categories.end(), v) -
                                  m.categories.begin());
}

}  // namespace

double polychoric_pair(std::span<const std::optional<int>> x, std::span<const std::optional<int>> y,
                       const PolychoricOptions& options) {
  if (x.size() != y.size()) throw InputError("polychoric: columns differ in length");
  std::vector<int> xs;
  std::vector<int> ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) {
      xs.push_back(*x[i]);
      ys.push_back(*y[i]);
    }
  }
  const auto mx = margins(xs);
  const auto my = margins(ys);
  const std::size_t rows = mx.categories.size();
  const std::size_t cols = my.categories.size();

  std::vector<double> counts(rows * cols, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    counts[category_index(mx, xs[i]) * cols + category_index(my, ys[i])] += 1.0;
  }

  std::vector<double> corner((rows + 1) * (cols + 1));
  auto log_likelihood = [&](double rho) {
    for (std::size_t a = 0; a <= rows; ++a) {
      for (std::size_t b = 0; b <= cols; ++b) {
        corner[a * (cols + 1) + b] = normal::bivariate_cdf(mx.cuts[a], my.cuts[b], rho);
      }
    }
    double ll = 0.0;
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        const double n_ab = counts[a * cols + b];
        if (n_ab == 0.0) continue;
        const double p = corner[(a + 1) * (cols + 1) + b + 1] - corner[a * (cols + 1) + b + 1] -
                         corner[(a + 1) * (cols + 1) + b] + corner[a * (cols + 1) + b];
        ll += n_ab * std::log(std::max(p, 1e-300));
      }
    }
    return ll;
  };

  // Golden-section maximization on [-bound, bound].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -options.bound;
  double hi = options.bound;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = log_likelihood(c);
  double fd = log_likelihood(d);
  int iter = 0;
  while (hi - lo > options.tol) {
    if (++iter > options.max_iter) {
      throw ConvergenceError("polychoric: golden-section search did not converge in " +
                             std::to_string(options.max_iter) + " iterations");
    }
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = log_likelihood(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = log_likelihood(d);
    }
  }
  double best = (lo + hi) / 2.0;
  double best_ll = log_likelihood(best);
  // The maximum may sit on the boundary (e.g. perfectly dependent columns).
  for (const double edge : {-options.bound, options.bound}) {
    const double ll = log_likelihood(edge);
    if (ll > best_ll) {
      best = edge;
      best_ll = ll;
    }
  }
  return std::clamp(best, -options.bound, options.bound);
}

CorrelationMatrix polychoric(const ResponseMatrix& responses, const PolychoricOptions& options) {
  const auto p = static_cast<Eigen::Index>(responses.items());
  std::vector<std::vector<std::optional<int>>> columns(responses.items());
  for (std::size_t j = 0; j < responses.items(); ++j) {
    columns[j].resize(responses.rows());
    for (std::size_t r = 0; r < responses.rows(); ++r) columns[j][r] = responses.at(r, j);
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = a + 1; b < p; ++b) {
      try {
        r(a, b) = r(b, a) = polychoric_pair(columns[a], columns[b], options);
      } catch (const InputError& e) {
        throw InputError("polychoric " + pair_label(responses, a, b) + ": " + e.what());
      }
    }
  }
  return CorrelationMatrix(std::move(r));
}

CorrelationMatrix correlate(const ResponseMatrix& responses, CorrelationKind kind) {
  return kind == CorrelationKind::pearson ? pearson(responses) : polychoric(responses);
}

Eigen::VectorXd smc(const CorrelationMatrix& corr) {
  Eigen::MatrixXd r = corr.values();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
  if (!lu.isInvertible()) {
    r.diagonal().array() += 1e-8;
    lu.compute(r);
    if (!lu.isInvertible()) throw InputError("smc: correlation matrix is singular");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  const double upper = std::nextafter(1.0, 0.0);
  Eigen::VectorXd out(r.rows());
  for (Eigen::Index j = 0; j < r.rows(); ++j) {
    out(j) = std::clamp(1.0 - 1.0 / inv(j, j), 0.0, upper);
  }
  return out;
}

}  // namespace digestlab

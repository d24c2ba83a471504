#pragma once

namespace digestlab::normal {

double pdf(double x);
double cdf(double x);

// Inverse of cdf on (0, 1); returns -inf / +inf at 0 / 1.
double quantile(double p);

// P(X <= h, Y <= k) for a standard bivariate normal with correlation r.
// Infinite limits are allowed. Absolute error is below 1e-7 (Gauss-Legendre
// evaluation of the Drezner-Wesolowsky / Genz integral forms).
double bivariate_cdf(double h, double k, double r);

}  // namespace digestlab::normal

#pragma once

#include <cstddef>

namespace trimlevy {

// Regularized lower incomplete gamma P(a,x) and its complement Q(a,x).
double lower_reg_gamma(double a, double x);
double upper_reg_gamma(double a, double x);

// Inverse of P(a,.) for fixed a: returns x with P(a,x) = p.
double inv_lower_reg_gamma(double a, double p);

// Exponential integral E1(x), x > 0.
double exp_integral_e1(double x);

double ln_beta(double a, double b);

// Complement of the Kolmogorov distribution, Q(x) = P(sup|B| > x).
// The one-sample KS p-value at distance d with n points is roughly
// kolmogorov_q(d * sqrt(n)).
double kolmogorov_q(double x);

// Quantile of the Kolmogorov distribution: x with Q(x) = q.
double kolmogorov_q_inv(double q);

}  // namespace trimlevy

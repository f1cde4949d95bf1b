#pragma once

namespace polycop {

// CDF/quantile saturate beyond this point so results are identical across
// platforms and libm versions.
inline constexpr double kNormalTailCutoff = 8.5;

double std_normal_pdf(double x);

// Standard normal CDF. Absolute error below 1e-12; returns exactly 0 or 1
// for |x| > kNormalTailCutoff.
double std_normal_cdf(double x);

// Inverse standard normal CDF (Wichura's AS241). Throws DomainError unless
// 0 < p < 1.
double std_normal_quantile(double p);

// P(X <= x, Y <= y) for standard bivariate normal with correlation rho.
// Fixed 20-node Gauss-Legendre on the single-integral (arcsin) form, with a
// separate transformed integral for |rho| > 0.925; absolute accuracy ~1e-14.
// Throws DomainError for |rho| >= 1.
double bivariate_normal_cdf(double x, double y, double rho);

// Inverse-CDF draw from N(0,1) truncated to (lower, upper); bounds may be
// +-infinity. Deterministic and nondecreasing in u; result lies strictly
// inside the interval. Throws DomainError if lower >= upper or u outside
// (0,1).
double truncated_normal_draw(double lower, double upper, double u);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-squared survival function P(X > x) with dof degrees of freedom.
double chi_squared_sf(double x, double dof);

}  // namespace polycop

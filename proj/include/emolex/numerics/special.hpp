#pragma once

// Special functions used by the Dirichlet KL term, Gamma reparameterization
// gradients and the p-values of the significance tests. All throw DomainError
// outside their domain.

namespace emolex::numerics {

// ln Γ(x), x > 0. Lanczos approximation (g = 7, 9 coefficients).
double log_gamma(double x);

// ψ(x) = d/dx ln Γ(x), x > 0. Upward recurrence to x >= 6, then asymptotic series.
double digamma(double x);

// ψ'(x), x > 0.
double trigamma(double x);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// ∂P(a, x)/∂a, from the power series of P differentiated term by term.
double gamma_p_shape_derivative(double a, double x);

// Density of Gamma(a, 1) at x.
double gamma_pdf(double a, double x);

// x such that P(a, x) = u, 0 < u < 1.
double gamma_quantile(double a, double u);

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

// Survival functions used for p-values.
double f_sf(double f, double df1, double df2);
double chi2_sf(double x, double df);

}  // namespace emolex::numerics

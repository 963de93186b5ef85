#pragma once

namespace elmiss {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi2_cdf(double x, double dof);
// Upper tail 1 - F(x), computed without cancellation.
double chi2_sf(double x, double dof);
double chi2_pdf(double x, double dof);

// Quantile of the chi-squared distribution: Wilson-Hilferty start refined by
// safeguarded Newton steps on chi2_cdf. Absolute error below 1e-9.
double chi2_quantile(double probability, double dof);

// Standard normal quantile (Acklam's rational approximation with one Halley
// correction step); used for starting points.
double normal_quantile(double probability);

}  // namespace elmiss

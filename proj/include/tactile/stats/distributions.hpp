#pragma once

namespace tactile::stats {

double normal_cdf(double x);
// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);

// I_x(a, b)
double regularized_beta(double x, double a, double b);
// P(a, x) and Q(a, x) = 1 - P(a, x)
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// All df arguments must be > 0 (DomainError otherwise).
double student_t_cdf(double t, double df);
// P(|T| >= |t|)
double student_t_two_sided_p(double t, double df);

double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);

double chisq_cdf(double x, double df);
double chisq_sf(double x, double df);

// Distribution of the range of k standard normals divided by an independent
// sqrt(chi^2_df / df). Computed by nested adaptive Gauss-Kronrod quadrature
// (outer over the chi scale, inner over the range probability); absolute
// error below 1e-6. df = infinity is accepted.
double studentized_range_cdf(double q, double k, double df);
double studentized_range_sf(double q, double k, double df);
double studentized_range_quantile(double p, double k, double df);

}  // namespace tactile::stats

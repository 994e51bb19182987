#pragma once

#include <functional>

namespace factjudge {

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction, using
// I_x(a,b) = 1 - I_{1-x}(b,a) above x = (a+1)/(a+b+2).
// Requires 0 <= x <= 1, a > 0, b > 0; throws std::domain_error otherwise.
double regularized_incomplete_beta(double x, double a, double b);

// P(F > f) for F ~ F(d1, d2).
double f_sf(double f, int d1, int d2);

// P(T > t) for Student's t with df degrees of freedom.
double student_t_sf(double t, int df);

double normal_cdf(double x);

// P(R < w) where R is the range of k independent standard normals.
double normal_range_cdf(double w, int k);

// P(Q > q) for the studentized range with k means and df error degrees of
// freedom:  integral over s of chi-scale density(s) * (1 - P(R < q s)).
double studentized_range_sf(double q, int k, int df);

// Adaptive Gauss-Kronrod (7/15) on [a, b] to absolute tolerance `tol`.
double integrate_gk15(const std::function<double(double)>& f, double a, double b, double tol,
                      int max_depth = 30);

}  // namespace factjudge

#pragma once

#include <cstddef>
#include <span>

namespace raggain {

/// Sample Pearson correlation. Throws on length mismatch, n < 3, or a
/// constant sequence (correlation undefined).
double pearson(std::span<const double> xs, std::span<const double> ys);

/// I_x(a, b), evaluated with the modified Lentz continued fraction
/// (absolute accuracy ~1e-10 or better). Requires a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double x, double a, double b);

/// P(|T| >= |t|) for Student's t with `dof` degrees of freedom, via
/// I_{dof/(dof+t^2)}(dof/2, 1/2). Exactly 1 at t = 0.
double student_t_two_tailed_p(double t, double dof);

struct WilliamsResult {
    double t = 0.0;
    double p = 1.0;  ///< two-tailed, n - 3 degrees of freedom
};

/// Williams' test for the difference between two dependent correlations
/// r12 = corr(x1, y) and r13 = corr(x2, y) sharing y, with r23 = corr(x1, x2):
///
///   t = (r12 - r13) sqrt( (n-1)(1+r23) / (2K(n-1)/(n-3) + ((r12+r13)^2/4)(1-r23)^3) )
///   K = 1 - r12^2 - r13^2 - r23^2 + 2 r12 r13 r23
///
/// Throws when n <= 3, any |r| >= 1, or K <= 0.
WilliamsResult williams_test(double r12, double r13, double r23, std::size_t n);

}  // namespace raggain

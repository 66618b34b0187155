#pragma once

#include <vector>

namespace mislabel {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation. Relative error target 1e-10 over a, b > 0, x in [0, 1]
// (in practice the Lentz iteration converges to near machine precision).
double regularized_incomplete_beta(double a, double b, double x);

// Inverse of I_x(a, b) in x for fixed a, b: returns x with I_x(a,b) = p.
double incomplete_beta_inverse(double a, double b, double p);

// Two-sided tail probability P(|T| >= t) for Student's t with df degrees
// of freedom, via I_x(df/2, 1/2) at x = df / (df + t^2).
double student_t_two_sided_p(double t, double df);

// Exact one-sided upper confidence bound for a binomial proportion
// (Clopper-Pearson): the smallest rate p such that observing at most
// `errors` failures out of n has probability cf under Bin(n, p).
// errors == n yields 1; errors == 0 yields 1 - cf^(1/n).
double binomial_upper_bound(double errors, double n, double cf);

// Upper tail P(X >= k) for X ~ Bin(m, p), summed directly (m is small).
double binomial_upper_tail(int m, int k, double p);

double mean(const std::vector<double>& v);
// Sample standard deviation (n-1 divisor); 0 for fewer than two values.
double sample_sd(const std::vector<double>& v);

// Two-tailed paired t-test p-value on the element-wise differences a - b.
// Degenerate cases: all differences zero -> 1; zero variance with nonzero
// mean -> 0.
double paired_t_test(const std::vector<double>& a,
                     const std::vector<double>& b);

}  // namespace mislabel

#pragma once

// Special functions behind the p-values: regularized incomplete gamma and
// beta, the normal CDF and its inverse, and the tails built on them.

namespace votewire::stats {

// P(a, x) = gamma(a, x) / Gamma(a). Series for x < a + 1, Lentz continued
// fraction otherwise. Throws kDomainError for a <= 0 or x < 0.
double RegIncompleteGammaP(double a, double x);
double RegIncompleteGammaQ(double a, double x);

// I_x(a, b), continued fraction with the x > (a + 1) / (a + b + 2) symmetry
// switch. Throws kDomainError outside x in [0, 1], a, b > 0.
double RegIncompleteBeta(double x, double a, double b);

double NormalCdf(double z);

// Inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley step against the erfc-based CDF. Throws kPOutOfRange unless
// 0 < p < 1.
double NormalQuantile(double p);

// Upper tail of the chi-square distribution with `df` degrees of freedom.
double ChiSquareUpperTail(double x, double df);
// Upper tail of F(d1, d2).
double FUpperTail(double f, double d1, double d2);
// Two-sided tail P(|T| >= |t|) of Student's t.
double StudentTwoSidedTail(double t, double df);

}  // namespace votewire::stats

#pragma once

namespace dbalign::special {

/// ln B(a, b); lgamma for small arguments, Stirling differences for large.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
///
/// Modified Lentz evaluation of the standard continued fraction, applied to
/// I_x(a,b) when x < (a+1)/(a+b+2) and to 1 - I_{1-x}(b,a) otherwise. The
/// prefactor x^a (1-x)^b / (a B(a,b)) is formed in the log domain, so large
/// shape parameters (a ~ 1e5) stay finite. Relative tolerance 1e-14; throws
/// NumericError if the fraction has not converged after 10000 terms.
double ibeta(double a, double b, double x);

/// 1 - I_x(a, b) without cancellation (evaluated as I_{1-x}(b, a)).
double ibetac(double a, double b, double x);

/// Pr{S >= t} where S is the cosine between two independent isotropic
/// directions in R^d (density (1-s^2)^((d-3)/2) / B((d-1)/2, 1/2)).
/// Requires d >= 2. Values of t outside [-1, 1] are clamped.
double cap_tail(int d, double t);

}  // namespace dbalign::special

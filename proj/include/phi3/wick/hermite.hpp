#pragma once

namespace phi3::wick {

/// Wick-ordered monomials for variance c: H1 = x, H2 = x^2 - c, H3 = x^3 - 3 c x.
/// Evaluated in double-double and rounded once, so the result is the
/// correctly rounded value except in near-tie cases.
/// Throws UnsupportedDegree for k outside {1, 2, 3}.
double hermite(int k, double x, double c);

/// H_k(x; c1) through the expansion around variance c2:
///   H2(x; c1) = H2(x; c2) - (c1 - c2),  H3(x; c1) = H3(x; c2) - 3 (c1 - c2) x.
/// Same rounding discipline as hermite(), so both routes agree to the ulp.
double recenter(int k, double x, double c1, double c2);

}  // namespace phi3::wick

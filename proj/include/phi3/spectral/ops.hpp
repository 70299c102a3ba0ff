#pragma once

#include "phi3/spectral/field.hpp"

namespace phi3::spectral {

/// P_{N'}: zero every coefficient with |lambda| > N'. The result lives on the
/// same lattice. Throws CutoffExceedsLattice if N' > lattice N.
Field project(const Field& field, double N_prime);

/// Copy of the coefficients onto another lattice of the same L; modes absent
/// from the target are dropped, modes absent from the source are zero.
Field transfer(const Field& field, const LatticePtr& target);

/// (sum <lambda>^{2s} |phi_hat|^2)^{1/2}
double sobolev_norm(const Field& field, double s);

/// (sum_{lambda != 0} |lambda|^{2s} |phi_hat|^2)^{1/2}
double homogeneous_sobolev_norm(const Field& field, double s);

/// ||grad phi||_{L^2}^2 with the true gradient, 4 pi^2 sum |lambda|^2 |phi_hat|^2.
double gradient_sq(const Field& field);

struct LpResult {
  double value = 0.0;
  bool aliased = false;  // p K reaches the grid bandwidth
};

/// (integral |phi|^p)^{1/p} by trapezoidal quadrature on a G x G grid
/// (G = 0 selects the lattice grid M).
LpResult lp_norm_checked(const Field& field, double p, int G = 0);
double lp_norm(const Field& field, double p);

/// integral of phi^3, exact: evaluated on a grid of at least 3K + 1 points.
double cube_integral(const Field& field);

/// psi(x) = L^-2 phi(x / L) on the torus of side L^2; psi_hat(n) = phi_hat(n) / L
/// on the lattice (L^2, N / L, M).
Field rescale_down(const Field& field);

/// Inverse of rescale_down: phi(y) = L^2 psi(L y) from a field on (L^2, N', M)
/// to (L, N' L, M).
Field rescale_up(const Field& field);

}  // namespace phi3::spectral

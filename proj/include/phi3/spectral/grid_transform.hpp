#pragma once

#include <complex>
#include <span>
#include <vector>

#include "phi3/spectral/lattice.hpp"

namespace phi3::spectral {

/// FFTW-backed synthesis/analysis between lattice coefficients and a G x G
/// real grid. Plans are created once per grid size and shared; execution uses
/// the new-array interface so concurrent calls are safe.
///
/// Conventions: phi(x_j) = sum_n c(n) exp(2 pi i n.j / G) / L, and
/// c(n) = (L / G^2) sum_j phi(x_j) exp(-2 pi i n.j / G).
void synthesize(const FourierLattice& lattice, std::span<const std::complex<double>> coeffs,
                int G, std::span<double> out);

void analyze(const FourierLattice& lattice, std::span<const double> values, int G,
             std::span<std::complex<double>> out);

/// Trapezoidal quadrature weight (L / G)^2 of one grid cell.
inline double cell_area(double L, int G) {
  const double h = L / G;
  return h * h;
}

}  // namespace phi3::spectral

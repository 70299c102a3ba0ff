#pragma once

#include <utility>

#include "phi3/spectral/field.hpp"

namespace phi3::wick {

using spectral::Field;
using spectral::FourierLattice;
using spectral::LatticePtr;

struct InteractionParams {
  double sigma = 0.0;
  double A = 0.0;
  double wick_constant = 0.0;  // sigma_{L,N}

  /// Wick constant set to tadpole(L, N) of the lattice.
  static InteractionParams for_lattice(const FourierLattice& lattice, double sigma, double A);
};

struct PotentialValue {
  double cubic = 0.0;    // (sigma / 3) int :phi^3:
  double quartic = 0.0;  // A (int :phi^2:)^2
  double total = 0.0;
};

/// :phi^2: = phi^2 - c, returned exactly on the lattice (L, 2N). The square is
/// formed on a G x G grid (default: the lattice grid M); AliasingError if
/// G < 4K + 1.
Field wick_square(const Field& field, double c, int grid = 0);

/// :phi^3: = phi^3 - 3 c phi, returned exactly on the lattice (L, 3N). Default
/// grid is the smallest FFT-friendly size >= 6K + 1; AliasingError below that.
Field wick_cube(const Field& field, double c, int grid = 0);

/// V_N(phi) = (sigma/3) int :phi^3: + A (int :phi^2:)^2. int phi^3 uses an
/// exact grid of at least 3K + 1 points, int phi^2 uses Parseval.
PotentialValue interaction(const Field& field, const InteractionParams& params);

/// Same value from precomputed integrals int phi, int phi^2, int phi^3.
PotentialValue interaction_from_moments(double int1, double int2, double int3, double area,
                                        const InteractionParams& params);

/// Potential plus its L^2 gradient P_N[sigma :phi^2: + 4 A (int :phi^2:) phi],
/// obtained from the same grid pass.
struct PotentialWithGradient {
  PotentialValue value;
  Field gradient;
};
PotentialWithGradient interaction_gradient(const Field& field, const InteractionParams& params);

/// Gaussian data <1>, <2>, <3> = phi, :phi^2:, :phi^3: of one sample.
struct WickData {
  Field one;
  Field two;
  Field three;

  static WickData from_sample(const Field& phi, double c);
};

/// (Phi1, Phi2) of the drift decomposition:
///   Phi1 = (s/3) int<3> + s int<2>T + s int<1>T^2 + (s/3) int T^3
///   Phi2 = A (int (<2> + 2<1>T + T^2))^2 - A (int T^2)^2
/// Throws CutoffMismatch when <1> and theta are on different lattices or the
/// torus sizes differ.
std::pair<double, double> drift_decomposition(const WickData& xi, const Field& theta,
                                              const InteractionParams& params);

/// int f g for fields on lattices of the same L (modes matched by index).
double cross_integral(const Field& f, const Field& g);

/// int f g h on a grid large enough to be exact.
double triple_integral(const Field& f, const Field& g, const Field& h);

}  // namespace phi3::wick

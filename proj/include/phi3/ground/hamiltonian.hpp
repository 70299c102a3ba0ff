#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "phi3/spectral/field.hpp"
#include "phi3/spectral/seed.hpp"

namespace phi3::ground {

using spectral::Field;

// Deterministic energies use the true gradient on T^2_L:
//   ||grad phi||^2 = 4 pi^2 sum |lambda|^2 |phi_hat|^2.
// H0(phi)  = 1/2 ||grad phi||^2 + (sigma/3) int phi^3
// H_L(phi) = H0(phi) + A (int phi^2)^2   [+ 1/2 int phi^2 with include_mass]

struct Energy {
  double gradient = 0.0;  // 1/2 ||grad phi||^2
  double cubic = 0.0;
  double quartic = 0.0;
  double mass_term = 0.0;
  double total = 0.0;
};

Energy hamiltonian(const Field& phi, double sigma, double A, bool include_mass = false);

struct TrajectoryPoint {
  double energy;
  double gradient_sq;  // ||grad phi||^2
  double l2_sq;        // ||phi||^2
};

struct MinimizerReport {
  std::optional<Field> field;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TrajectoryPoint> trajectory;
};

/// Large-torus surrogate for R^2: L = decay_lengths x sqrt(2m)/(|sigma| sqrt(q)),
/// with K modes per direction (N = K / L). Scaling L with the expected width
/// keeps the discrete problem identical across q.
struct ConstrainedGrid {
  double decay_lengths = 16.0;
  int K = 48;
  double tolerance = 1e-8;
  int max_iterations = 5000;
};

/// Expected decay length sqrt(2m) / (|sigma| sqrt(q)) of the mass-q minimizer.
double minimizer_decay_length(double q, double sigma);

/// min H0 subject to int phi^2 = q by projected preconditioned gradient descent
/// on the mass sphere. Throws NonConvergence after max_iterations.
MinimizerReport constrained_minimize(double q, double sigma, const ConstrainedGrid& grid = {});

/// |H*_{0,1}| from constrained_minimize (cached per sigma).
double critical_A(double sigma = 1.0);

/// sigma^2 / (8 m), the closed form implied by the Pohozaev identities of Q.
double critical_A_closed_form(double sigma = 1.0);

struct DescentOptions {
  double tolerance = 1e-8;
  int max_iterations = 20000;
  bool include_mass = false;
  bool record_trajectory = false;
  double divergence_level = -1e10;
};

/// Preconditioned gradient descent on H_L from init. Throws Divergence when the
/// energy drops below divergence_level; returns converged = false when the
/// iteration budget runs out.
MinimizerReport minimize_hamiltonian(const Field& init, double sigma, double A, const DescentOptions& opts = {});

/// min over the recorded trajectory of (H(phi) - H(0)) / (||grad phi||^2 + ||phi||^4),
/// skipping points with vanishing denominator.
double fit_stability_constant(const MinimizerReport& report);

/// Energy -sigma^4 / (768 A^3 L^4) of the best constant field on T^2_L
/// (massless H_L), reached at phi = -sigma / (4 A L^2).
double constant_mode_energy(double L, double sigma, double A);

/// (H_L(phi_L), L^4 H_{L^2}(phi)) with phi_L = L^2 phi(L .), phi on T^2_{L^2}.
std::pair<double, double> check_scaling(const Field& phi_on_L2, double sigma, double A);

/// Mass-1 minimizer shape placed on the torus of the given lattice: rescaled
/// ground state -sign(sigma) alpha Q(beta x) with mass q.
Field soliton_field(const spectral::LatticePtr& lattice, double q, double sigma);

/// ||phi||_{L^p} / (||grad phi||^{1-theta} ||phi||^theta + L^{-1/3} ||phi||), theta = 2/3 at p = 3
/// in the form used by the torus inequality; 0 for the zero field.
double torus_gns_ratio(const Field& phi, double p = 3.0);

/// True when ||phi||_{L^3} <= C (||grad phi||^{1/3} ||phi||^{2/3} + L^{-1/3} ||phi||).
bool torus_gns_check(const Field& phi, double C, double p = 3.0);

/// max ratio over a calibration family of random fields on L in {1, 2, 4, 8},
/// times `safety`, and never below 1 (constants saturate at C = 1).
double calibrate_torus_gns_constant(const SeedSpec& seed, int count = 2000, double safety = 1.05);

/// Random field family used for torus GNS tests: GFF-like spectra with random
/// slope and band, random constant offsets, and localized bumps.
Field random_test_field(const spectral::LatticePtr& lattice, Rng& rng);

/// int |phi|^3 / (||grad phi|| ||phi||^2) for a field treated as a function on R^2.
double gns_ratio(const Field& phi);

}  // namespace phi3::ground

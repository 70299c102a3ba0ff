#pragma once

#include <filesystem>
#include <vector>

namespace phi3::ground {

/// Radial ground state of Q'' + Q'/r + 2Q^2 - 2Q = 0 on a uniform r grid.
/// Beyond the matching radius the profile is the decaying linear solution
/// C K0(sqrt(2) r).
struct RadialProfile {
  std::vector<double> r_grid;
  std::vector<double> values;       // Q(r)
  std::vector<double> derivatives;  // Q'(r)
  double r_max = 0.0;
  double center_value = 0.0;
  double r_match = 0.0;  // start of the K0 tail
  double tail_coefficient = 0.0;
  double mass = 0.0;      // 2 pi int Q^2 r dr, ODE-augmented route plus tail quadrature
  double mass_alt = 0.0;  // same integral, Richardson-extrapolated trapezoid on the grid
  double step = 0.0;
};

struct ShootingOptions {
  double q_low = 1.5;   // undershoots
  double q_high = 10.0; // overshoots
  double step = 1e-3;   // output grid spacing
  double match_level = 1e-5;
  double floor_level = 1e-8;
  double ode_tolerance = 1e-13;
};

/// Bisection on Q(0) between undershoot (Q' turns positive) and overshoot
/// (Q crosses zero) until the bracket is narrower than `tolerance`.
/// Throws BracketNotFound if the bounds do not separate the branches.
RadialProfile shoot_ground_state(double tolerance = 1e-14, const ShootingOptions& opts = {});

/// Cached default ground state.
const RadialProfile& ground_state();

/// max |Q'' + Q'/r + 2Q^2 - 2Q| on the grid with fourth-order differences.
double ode_residual(const RadialProfile& profile);

/// 2 pi int f(Q, Q') r dr by composite Simpson on the grid.
double radial_integral(const RadialProfile& profile, double (*f)(double q, double dq));

/// Sharp constant (3/2) ||Q||^-1 of int |phi|^3 <= C ||grad phi|| ||phi||^2.
double gns_constant();

/// ||Q||_3^3 / (||grad Q|| ||Q||_2^2) evaluated from the profile.
double gns_ratio(const RadialProfile& profile);

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& profile);

}  // namespace phi3::ground

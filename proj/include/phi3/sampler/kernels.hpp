#pragma once

#include "phi3/spectral/field.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/seed.hpp"
#include "phi3/wick/interaction.hpp"

namespace phi3::sampler {

using spectral::Field;
using wick::InteractionParams;
using wick::PotentialValue;

/// Target: the truncated Gaussian measure times exp(-beta V). beta = 1 is the
/// Gibbs measure; smaller beta are the tempered targets used by annealing.
struct Target {
  InteractionParams params;
  double beta = 1.0;
  spectral::GffOptions gff;
};

struct ChainState {
  Field field;
  PotentialValue potential;
  Field gradient;  // L^2 gradient of V at field (unscaled by beta)
  long step_count = 0;
  long accept_count = 0;

  static ChainState at(const Field& field, const InteractionParams& params);
};

/// Independence Metropolis-Hastings: fresh draw from the reference Gaussian,
/// accepted with probability min(1, exp(-beta V' + beta V)).
void imh_step(ChainState& state, const Target& target, Rng& rng);

struct LangevinOptions {
  bool mala = true;  // Metropolis correction; false gives the tamed integrator
};

/// One exponential-integrator step of
///   dphi = -[(1 - Delta) phi + beta grad V(phi)] dt + sqrt(2) dW,
/// mode-wise exact for the linear part with the gradient frozen over the step:
///   c' = e^{-a tau} c - (1 - e^{-a tau}) / a * beta G + sqrt((1 - e^{-2 a tau}) / a) xi,
/// a = <lambda>^2. With mala the proposal is accepted by the Metropolis-Hastings
/// ratio of the Gaussian proposal densities; otherwise G is tamed by
/// 1 / (1 + tau ||G||) and the step is always accepted.
void langevin_step(ChainState& state, double tau, const Target& target, Rng& rng, const LangevinOptions& opts = {});

/// Exact slice-sampling update of the zero mode given the others. Along the
/// zero mode V is a quartic polynomial, so each density evaluation is cheap;
/// the step counters are left untouched. No-op for the massless variant.
void zero_mode_slice_step(ChainState& state, const Target& target, Rng& rng, double width = 2.0);

/// The Langevin drift -[(1 - Delta) phi + grad V(phi)] at a given field.
Field langevin_drift(const Field& phi, const InteractionParams& params);

}  // namespace phi3::sampler

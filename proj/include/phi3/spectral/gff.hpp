#pragma once

#include "phi3/spectral/field.hpp"
#include "phi3/spectral/seed.hpp"

namespace phi3::spectral {

struct GffOptions {
  /// Drop the zero mode and use covariance |lambda|^-2 (massless, mean zero).
  bool massless_mean_zero = false;
};

/// Per-mode standard deviation of |phi_hat(lambda)|: <lambda>^-1, or |lambda|^-1
/// (0 on the zero mode) in the massless variant.
double gff_scale(const FourierLattice& lattice, std::size_t i, const GffOptions& opts = {});

/// Truncated Gaussian free field: phi_hat(lambda) = g_n / <lambda> with g
/// standard complex Gaussian (E|g|^2 = 1), g_{-n} = conj(g_n), real zero mode.
Field sample_gff(const LatticePtr& lattice, const SeedSpec& seed, const GffOptions& opts = {});

/// Same, drawing from an existing generator.
Field sample_gff(const LatticePtr& lattice, Rng& rng, const GffOptions& opts = {});

/// sigma_{L,N} = L^-2 sum_{|n| <= L N} (1 + |n|^2 / L^2)^-1, the pointwise
/// variance of the truncated field. Exact lattice sum.
double tadpole(double L, double N);

/// Same sum with the massless mean-zero covariance |lambda|^-2.
double tadpole_massless(double L, double N);

}  // namespace phi3::spectral

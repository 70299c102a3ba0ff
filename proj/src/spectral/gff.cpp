#include "phi3/spectral/gff.hpp"

#include <cmath>

namespace phi3::spectral {

double gff_scale(const FourierLattice& lattice, std::size_t i, const GffOptions& opts) {
  if (opts.massless_mean_zero) {
    const double f = lattice.freq_sq(i);
    return f > 0.0 ? 1.0 / std::sqrt(f) : 0.0;
  }
  return 1.0 / std::sqrt(lattice.bracket_sq(i));
}

Field sample_gff(const LatticePtr& lattice, Rng& rng, const GffOptions& opts) {
  std::vector<Complex> c(lattice->size());
  const double half = std::sqrt(0.5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i == FourierLattice::zero_index()) {
      const double g = rng.normal();
      c[i] = {g * gff_scale(*lattice, i, opts), 0.0};
    } else if (lattice->is_representative(i)) {
      const double s = gff_scale(*lattice, i, opts);
      const double a = rng.normal();
      const double b = rng.normal();
      c[i] = {half * a * s, half * b * s};
      c[lattice->conjugate(i)] = std::conj(c[i]);
    }
  }
  return Field(lattice, std::move(c));
}

Field sample_gff(const LatticePtr& lattice, const SeedSpec& seed, const GffOptions& opts) {
  Rng rng(seed);
  return sample_gff(lattice, rng, opts);
}

namespace {

template <class Weight>
double lattice_sum(double L, double N, Weight w) {
  const int K = max_index(L, N);
  const double limit = (L * N) * (L * N) * (1.0 + 1e-12) + 1e-9;
  const double inv_L2 = 1.0 / (L * L);
  double total = 0.0;
  // Sum row by row so the accumulation order is fixed.
  for (int n1 = -K; n1 <= K; ++n1) {
    double row = 0.0;
    for (int n2 = -K; n2 <= K; ++n2) {
      const double r2 = static_cast<double>(n1) * n1 + static_cast<double>(n2) * n2;
      if (r2 <= limit) row += w(r2 * inv_L2);
    }
    total += row;
  }
  return total * inv_L2;
}

}  // namespace

double tadpole(double L, double N) {
  return lattice_sum(L, N, [](double f) { return 1.0 / (1.0 + f); });
}

double tadpole_massless(double L, double N) {
  return lattice_sum(L, N, [](double f) { return f > 0.0 ? 1.0 / f : 0.0; });
}

}  // namespace phi3::spectral

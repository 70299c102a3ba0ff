#include "phi3/sampler/kernels.hpp"

#include <cmath>

#include "phi3/spectral/ops.hpp"

namespace phi3::sampler {

using spectral::Complex;
using spectral::FourierLattice;

ChainState ChainState::at(const Field& field, const InteractionParams& params) {
  auto vg = wick::interaction_gradient(field, params);
  return ChainState{field, vg.value, std::move(vg.gradient), 0, 0};
}

void imh_step(ChainState& state, const Target& target, Rng& rng) {
  Field proposal = spectral::sample_gff(state.field.lattice_ptr(), rng, target.gff);
  auto vg = wick::interaction_gradient(proposal, target.params);
  const double log_ratio = -target.beta * (vg.value.total - state.potential.total);
  ++state.step_count;
  if (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio) {
    state.field = std::move(proposal);
    state.potential = vg.value;
    state.gradient = std::move(vg.gradient);
    ++state.accept_count;
  }
}

namespace {

double mode_rate(const FourierLattice& lat, std::size_t i, const Target& t) {
  return t.gff.massless_mean_zero ? lat.freq_sq(i) : lat.bracket_sq(i);
}

// Per-mode coefficients of the exponential integrator.
struct StepCoeffs {
  double decay;   // e^{-a tau}
  double gain;    // (1 - e^{-a tau}) / a
  double spread;  // (1 - e^{-2 a tau}) / a, the proposal variance per complex mode
};

StepCoeffs coeffs(double a, double tau) {
  const double e = std::exp(-a * tau);
  return {e, -std::expm1(-a * tau) / a, -std::expm1(-2.0 * a * tau) / a};
}

// log of the proposal density of `to` given the mean, over real dofs. Zero mode
// is one real dof with variance s; each Hermitian pair is two real dofs of
// variance s / 2.
double log_proposal(const Field& to, const std::vector<Complex>& mean, const std::vector<double>& spread,
                    const FourierLattice& lat) {
  double s = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (spread[i] <= 0.0) continue;
    if (i == FourierLattice::zero_index()) {
      const double d = to[i].real() - mean[i].real();
      s -= d * d / (2.0 * spread[i]);
    } else if (lat.is_representative(i)) {
      s -= std::norm(to[i] - mean[i]) / spread[i];
    }
  }
  return s;
}

// log density of the target up to a constant: -1/2 sum a |c|^2 - beta V.
double log_target(const Field& f, double V, const Target& t) {
  const auto& lat = f.lattice();
  double q = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) q += mode_rate(lat, i, t) * std::norm(f[i]);
  return -0.5 * q - t.beta * V;
}

std::vector<Complex> proposal_mean(const Field& c, const Field& grad, double gscale, double tau, const Target& t,
                                   std::vector<double>* spread) {
  const auto& lat = c.lattice();
  std::vector<Complex> m(c.size());
  if (spread) spread->assign(c.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = mode_rate(lat, i, t);
    if (a <= 0.0) continue;  // massless zero mode stays at zero
    const auto k = coeffs(a, tau);
    m[i] = k.decay * c[i] - k.gain * t.beta * gscale * grad[i];
    if (spread) (*spread)[i] = k.spread;
  }
  return m;
}

}  // namespace

void langevin_step(ChainState& state, double tau, const Target& target, Rng& rng, const LangevinOptions& opts) {
  const auto& lat = state.field.lattice();
  double gscale = 1.0;
  if (!opts.mala) gscale = 1.0 / (1.0 + tau * target.beta * std::sqrt(spectral::l2_sq(state.gradient)));

  std::vector<double> spread;
  auto mean = proposal_mean(state.field, state.gradient, gscale, tau, target, &spread);
  std::vector<Complex> c(mean.size());
  const double half = std::sqrt(0.5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (spread[i] <= 0.0) continue;
    const double sd = std::sqrt(spread[i]);
    if (i == FourierLattice::zero_index()) {
      c[i] = {mean[i].real() + sd * rng.normal(), 0.0};
    } else if (lat.is_representative(i)) {
      const double a = rng.normal();
      const double b = rng.normal();
      c[i] = mean[i] + sd * half * Complex{a, b};
      c[lat.conjugate(i)] = std::conj(c[i]);
    }
  }
  Field proposal(state.field.lattice_ptr(), std::move(c));
  auto vg = wick::interaction_gradient(proposal, target.params);
  ++state.step_count;

  bool accept = true;
  if (opts.mala) {
    auto back = proposal_mean(proposal, vg.gradient, 1.0, tau, target, nullptr);
    const double log_alpha = log_target(proposal, vg.value.total, target) -
                             log_target(state.field, state.potential.total, target) +
                             log_proposal(state.field, back, spread, lat) - log_proposal(proposal, mean, spread, lat);
    accept = std::isfinite(log_alpha) && (log_alpha >= 0.0 || std::log(rng.uniform()) < log_alpha);
  }
  if (accept) {
    state.field = std::move(proposal);
    state.potential = vg.value;
    state.gradient = std::move(vg.gradient);
    ++state.accept_count;
  }
}

Field langevin_drift(const Field& phi, const InteractionParams& params) {
  const auto& lat = phi.lattice();
  auto vg = wick::interaction_gradient(phi, params);
  std::vector<Complex> d(phi.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -(lat.bracket_sq(i) * phi[i] + vg.gradient[i]);
  return Field(phi.lattice_ptr(), std::move(d));
}

void zero_mode_slice_step(ChainState& state, const Target& target, Rng& rng, double width) {
  if (target.gff.massless_mean_zero) return;
  const auto& lat = state.field.lattice();
  const double L = lat.L();
  const double c = target.params.wick_constant;
  Field rest = state.field;
  rest.set(FourierLattice::zero_index(), 0.0);
  const double s2 = spectral::l2_sq(rest);
  const double t3 = spectral::cube_integral(rest);
  const double a0 = mode_rate(lat, FourierLattice::zero_index(), target);
  // With phi = c0 / L + rest: int :phi^2: = s2 + c0^2 - c L^2 and
  // int :phi^3: = t3 + 3 c0 s2 / L + c0^3 / L - 3 c c0 L.
  auto log_density = [&](double c0) {
    const double w2 = s2 + c0 * c0 - c * L * L;
    const double w3 = t3 + 3.0 * c0 * s2 / L + c0 * c0 * c0 / L - 3.0 * c * c0 * L;
    const double V = target.params.sigma / 3.0 * w3 + target.params.A * w2 * w2;
    return -0.5 * a0 * c0 * c0 - target.beta * V;
  };
  const double x0 = state.field[FourierLattice::zero_index()].real();
  const double level = log_density(x0) + std::log(rng.uniform());
  double lo = x0 - width * rng.uniform();
  double hi = lo + width;
  for (int k = 0; k < 60 && log_density(lo) > level; ++k) lo -= width;
  for (int k = 0; k < 60 && log_density(hi) > level; ++k) hi += width;
  double x = x0;
  for (int k = 0; k < 200; ++k) {
    x = lo + (hi - lo) * rng.uniform();
    if (log_density(x) > level) break;
    (x < x0 ? lo : hi) = x;
    x = x0;
  }
  Field moved = state.field;
  moved.set(FourierLattice::zero_index(), x);
  const long steps = state.step_count, accepts = state.accept_count;
  state = ChainState::at(moved, target.params);
  state.step_count = steps;
  state.accept_count = accepts;
}

}  // namespace phi3::sampler

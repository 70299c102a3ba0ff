#include "phi3/ground/hamiltonian.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "phi3/errors.hpp"
#include "phi3/ground/radial.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/ops.hpp"
#include "phi3/wick/interaction.hpp"

namespace phi3::ground {

using spectral::Complex;
using spectral::FourierLattice;
using spectral::LatticePtr;

namespace {

constexpr double kTwoPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

struct EnergyGradient {
  Energy energy;
  Field gradient;
};

// L^2 gradient of H: 4 pi^2 |lambda|^2 phi + sigma phi^2 + 4 A (int phi^2) phi [+ phi]
EnergyGradient energy_gradient(const Field& phi, double sigma, double A, bool include_mass) {
  const auto& lat = phi.lattice();
  auto vg = wick::interaction_gradient(phi, wick::InteractionParams{sigma, A, 0.0});
  std::vector<Complex> g(vg.gradient.coeffs().begin(), vg.gradient.coeffs().end());
  double grad_sq = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k2 = kTwoPiSq * lat.freq_sq(i);
    g[i] += (k2 + (include_mass ? 1.0 : 0.0)) * phi[i];
    grad_sq += k2 * std::norm(phi[i]);
  }
  Energy e;
  e.gradient = 0.5 * grad_sq;
  e.cubic = vg.value.cubic;
  e.quartic = vg.value.quartic;
  e.mass_term = include_mass ? 0.5 * spectral::l2_sq(phi) : 0.0;
  e.total = e.gradient + e.cubic + e.quartic + e.mass_term;
  return {e, Field(phi.lattice_ptr(), std::move(g))};
}

Field precondition(const Field& g, double shift) {
  const auto& lat = g.lattice();
  std::vector<Complex> d(g.coeffs().begin(), g.coeffs().end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] /= shift + kTwoPiSq * lat.freq_sq(i);
  return Field(g.lattice_ptr(), std::move(d));
}

// Gaussian bump exp(-|x|^2 / (2 w^2)) on the torus, from its R^2 transform.
Field gaussian_bump(const LatticePtr& lat, double w) {
  std::vector<Complex> c(lat->size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double f2 = lat->freq_sq(i);
    c[i] = 2.0 * std::numbers::pi * w * w * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * w * w * f2) / lat->L();
  }
  return Field(lat, std::move(c));
}

}  // namespace

Energy hamiltonian(const Field& phi, double sigma, double A, bool include_mass) {
  const double l2 = spectral::l2_sq(phi);
  Energy e;
  e.gradient = 0.5 * spectral::gradient_sq(phi);
  e.cubic = sigma != 0.0 ? sigma / 3.0 * spectral::cube_integral(phi) : 0.0;
  e.quartic = A * l2 * l2;
  e.mass_term = include_mass ? 0.5 * l2 : 0.0;
  e.total = e.gradient + e.cubic + e.quartic + e.mass_term;
  return e;
}

double minimizer_decay_length(double q, double sigma) {
  return std::sqrt(2.0 * ground_state().mass) / (std::abs(sigma) * std::sqrt(q));
}

Field soliton_field(const LatticePtr& lat, double q, double sigma) {
  const auto& Q = ground_state();
  const double m = Q.mass;
  const double beta = std::abs(sigma) * std::sqrt(q) / (2.0 * std::sqrt(m));
  const double alpha = -sign(sigma) * 2.0 * beta * beta / std::abs(sigma);

  // Hankel transform Q_hat(k) = 2 pi int Q(r) J0(2 pi k r) r dr, one per |n|^2.
  std::map<long, double> cache;
  auto hankel = [&](double k) {
    const std::size_t n = Q.values.size() - 1;
    const std::size_t n_even = n - (n % 2);
    double s = 0.0;
    for (std::size_t i = 0; i <= n_even; ++i) {
      const double w = (i == 0 || i == n_even) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double r = Q.r_grid[i];
      s += w * Q.values[i] * boost::math::cyl_bessel_j(0, 2.0 * std::numbers::pi * k * r) * r;
    }
    return 2.0 * std::numbers::pi * s * Q.step / 3.0;
  };
  std::vector<Complex> c(lat->size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& mode = lat->mode(i);
    const long key = static_cast<long>(mode.n1) * mode.n1 + static_cast<long>(mode.n2) * mode.n2;
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, hankel(std::sqrt(lat->freq_sq(i)) / beta)).first;
    c[i] = alpha / (beta * beta) * it->second / lat->L();
  }
  Field f(lat, std::move(c));
  f *= std::sqrt(q / spectral::l2_sq(f));
  return f;
}

MinimizerReport constrained_minimize(double q, double sigma, const ConstrainedGrid& grid) {
  if (!(q > 0.0)) throw Error("constrained_minimize: mass must be positive");
  if (sigma == 0.0) throw Error("constrained_minimize: sigma must be nonzero");
  const double ell = minimizer_decay_length(q, sigma);
  const double L = grid.decay_lengths * ell;
  auto lat = FourierLattice::build(L, grid.K / L);
  const double beta = std::abs(sigma) * std::sqrt(q) / (2.0 * std::sqrt(ground_state().mass));
  const double shift = 2.0 * beta * beta;  // Lagrange multiplier of the minimizer

  Field phi = gaussian_bump(lat, ell);
  phi *= -sign(sigma) * std::sqrt(q / spectral::l2_sq(phi));

  auto tangent = [&](const Field& g, const Field& x) {
    Field t = g;
    t.axpy(-spectral::inner(g, x) / q, x);
    return t;
  };
  auto renormalize = [&](Field& x) { x *= std::sqrt(q / spectral::l2_sq(x)); };

  MinimizerReport rep;
  auto eg = energy_gradient(phi, sigma, 0.0, false);
  double step = 1.0;
  for (int it = 0;; ++it) {
    Field gt = tangent(eg.gradient, phi);
    rep.gradient_norm = std::sqrt(spectral::l2_sq(gt));
    rep.energy = eg.energy.total;
    rep.iterations = it;
    if (rep.gradient_norm <= grid.tolerance) {
      rep.converged = true;
      break;
    }
    if (it >= grid.max_iterations) {
      throw NonConvergence("constrained_minimize: no convergence after " + std::to_string(it) + " iterations");
    }
    Field d = tangent(precondition(gt, shift), phi);
    const double slope = spectral::inner(gt, d);  // > 0
    bool accepted = false;
    step = std::min(2.0 * step, 4.0);
    for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
      Field trial = phi;
      trial.axpy(-step, d);
      renormalize(trial);
      auto te = energy_gradient(trial, sigma, 0.0, false);
      if (te.energy.total <= eg.energy.total - 1e-4 * step * slope) {
        phi = std::move(trial);
        eg = std::move(te);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Energy differences fell below rounding; accept the stationary point if close.
      rep.converged = rep.gradient_norm <= 100.0 * grid.tolerance;
      if (!rep.converged) throw NonConvergence("constrained_minimize: line search failed");
      break;
    }
  }
  rep.field = std::move(phi);
  return rep;
}

double critical_A(double sigma) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard lock(mutex);
  const double key = std::abs(sigma);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double v = std::abs(constrained_minimize(1.0, sigma).energy);
  cache.emplace(key, v);
  return v;
}

double critical_A_closed_form(double sigma) { return sigma * sigma / (8.0 * ground_state().mass); }

MinimizerReport minimize_hamiltonian(const Field& init, double sigma, double A, const DescentOptions& opts) {
  MinimizerReport rep;
  Field phi = init;
  auto eg = energy_gradient(phi, sigma, A, opts.include_mass);
  auto record = [&](const Field& f, double e) {
    if (opts.record_trajectory) rep.trajectory.push_back({e, spectral::gradient_sq(f), spectral::l2_sq(f)});
  };
  record(phi, eg.energy.total);
  double step = 1.0;
  for (int it = 0;; ++it) {
    rep.gradient_norm = std::sqrt(spectral::l2_sq(eg.gradient));
    rep.energy = eg.energy.total;
    rep.iterations = it;
    if (rep.gradient_norm <= opts.tolerance) {
      rep.converged = true;
      break;
    }
    if (it >= opts.max_iterations) break;
    Field d = precondition(eg.gradient, 1.0);
    const double slope = spectral::inner(eg.gradient, d);
    bool accepted = false;
    step = std::min(2.0 * step, 16.0);
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      Field trial = phi;
      trial.axpy(-step, d);
      auto te = energy_gradient(trial, sigma, A, opts.include_mass);
      if (te.energy.total <= eg.energy.total - 1e-4 * step * slope) {
        phi = std::move(trial);
        eg = std::move(te);
        accepted = true;
        break;
      }
    }
    if (eg.energy.total < opts.divergence_level) {
      throw Divergence("minimize_hamiltonian: energy below " + std::to_string(opts.divergence_level));
    }
    if (!accepted) break;  // stalled at rounding level
    record(phi, eg.energy.total);
  }
  rep.field = std::move(phi);
  return rep;
}

double fit_stability_constant(const MinimizerReport& report) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& p : report.trajectory) {
    const double den = p.gradient_sq + p.l2_sq * p.l2_sq;
    if (den > 1e-300) c = std::min(c, p.energy / den);
  }
  return c;
}

double constant_mode_energy(double L, double sigma, double A) {
  return -std::pow(sigma, 4) / (768.0 * A * A * A * std::pow(L, 4));
}

std::pair<double, double> check_scaling(const Field& phi, double sigma, double A) {
  const double L = std::sqrt(phi.lattice().L());
  const Field up = spectral::rescale_up(phi);
  return {hamiltonian(up, sigma, A).total, std::pow(L, 4) * hamiltonian(phi, sigma, A).total};
}

double torus_gns_ratio(const Field& phi, double p) {
  const auto& lat = phi.lattice();
  const double l2 = std::sqrt(spectral::l2_sq(phi));
  if (l2 == 0.0) return 0.0;
  const double theta = 1.0 - 2.0 / p;
  const double grad = std::sqrt(spectral::gradient_sq(phi));
  const double lp = spectral::lp_norm_checked(phi, p, spectral::fft_friendly_size(2 * lat.M())).value;
  const double rhs = std::pow(grad, theta) * std::pow(l2, 1.0 - theta) + std::pow(lat.L(), -theta) * l2;
  return lp / rhs;
}

bool torus_gns_check(const Field& phi, double C, double p) { return torus_gns_ratio(phi, p) <= C; }

Field random_test_field(const LatticePtr& lat, Rng& rng) {
  const int kind = static_cast<int>(rng.uniform() * 3.0);
  std::vector<Complex> c(lat->size());
  if (kind == 2) {
    // sum of a few Gaussian bumps
    const int bumps = 1 + static_cast<int>(rng.uniform() * 4.0);
    Field f(lat);
    for (int b = 0; b < bumps; ++b) {
      const double w = lat->L() * (0.03 + 0.3 * rng.uniform());
      const double x1 = rng.uniform() * lat->L(), x2 = rng.uniform() * lat->L();
      const double amp = rng.normal();
      Field g = gaussian_bump(lat, w);
      std::vector<Complex> s(g.coeffs().begin(), g.coeffs().end());
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& m = lat->mode(i);
        s[i] *= amp * std::polar(1.0, -2.0 * std::numbers::pi * (m.n1 * x1 + m.n2 * x2) / lat->L());
      }
      f += Field(lat, std::move(s));
    }
    return f;
  }
  const double slope = 0.5 + 2.5 * rng.uniform();
  const double band = lat->N() * (0.2 + 0.8 * rng.uniform());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i != 0 && !lat->is_representative(i)) continue;
    const double f2 = lat->freq_sq(i);
    if (f2 > band * band) continue;
    const double s = std::pow(1.0 + f2, -slope / 2.0);
    c[i] = i == 0 ? Complex{rng.normal() * s, 0.0} : Complex{rng.normal() * s, rng.normal() * s};
    if (i != 0) c[lat->conjugate(i)] = std::conj(c[i]);
  }
  if (kind == 1) c[0] += 3.0 * rng.normal() * lat->L();
  return Field(lat, std::move(c));
}

double calibrate_torus_gns_constant(const SeedSpec& seed, int count, double safety) {
  Rng rng(seed);
  double worst = 1.0;
  const double Ls[] = {1.0, 2.0, 4.0, 8.0};
  for (int k = 0; k < count; ++k) {
    const double L = Ls[k % 4];
    auto lat = FourierLattice::build(L, 4.0 / L + 1.0);
    worst = std::max(worst, torus_gns_ratio(random_test_field(lat, rng)));
  }
  return std::max(1.0, safety * worst);
}

double gns_ratio(const Field& phi) {
  const auto& lat = phi.lattice();
  const double l2 = spectral::l2_sq(phi);
  if (l2 == 0.0) return 0.0;
  const double cube = std::pow(spectral::lp_norm_checked(phi, 3.0, spectral::fft_friendly_size(2 * lat.M())).value, 3);
  return cube / (std::sqrt(spectral::gradient_sq(phi)) * l2);
}

}  // namespace phi3::ground

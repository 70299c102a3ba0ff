// Acceptance suite: one PASS/FAIL line per criterion, with diagnostics indented
// below it. Optional arguments select criteria by number.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "phi3/errors.hpp"
#include "phi3/free_energy/free_energy.hpp"
#include "phi3/ground/hamiltonian.hpp"
#include "phi3/ground/radial.hpp"
#include "phi3/parallel.hpp"
#include "phi3/sampler/chain.hpp"
#include "phi3/sampler/concentration.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/ops.hpp"
#include "phi3/wick/hermite.hpp"
#include "phi3/wick/interaction.hpp"

using namespace phi3;
using spectral::Complex;
using spectral::Field;
using spectral::FourierLattice;
using wick::InteractionParams;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Moments {
  double mean = 0.0, var = 0.0, stderr_ = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v / n;
  for (double v : x) m.var += (v - m.mean) * (v - m.mean) / (n - 1.0);
  m.stderr_ = std::sqrt(m.var / n);
  return m;
}

InteractionParams params(double L, double N, double sigma, double A) {
  return InteractionParams::for_lattice(*FourierLattice::build(L, N), sigma, A);
}

// 1. tadpole(8, N) against ln N.
Outcome tadpole_law() {
  Outcome o;
  std::vector<double> x, y;
  for (double N : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    x.push_back(std::log(N));
    y.push_back(spectral::tadpole(8.0, N));
    o.note(fmt("N=%g tadpole=%.10g", N, y.back()));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  const double slope = sxy / sxx;
  o.require(std::abs(slope / (2.0 * std::numbers::pi) - 1.0) <= 0.1,
            fmt("slope %.6f vs 2pi = %.6f (rel. diff %.2e, tolerance 0.1)", slope, 2.0 * std::numbers::pi,
                std::abs(slope / (2.0 * std::numbers::pi) - 1.0)));
  return o;
}

// 2. Recentering to 2 ulp; zero means of the Wick integrals under the GFF.
Outcome wick_identities() {
  Outcome o;
  Rng rng(SeedSpec{2, 0});
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int k = 1 + static_cast<int>(rng.bits() % 3);
    const double x = -10.0 + 20.0 * rng.uniform(), c1 = 20.0 * rng.uniform(), c2 = 20.0 * rng.uniform();
    const double a = wick::hermite(k, x, c1), b = wick::recenter(k, x, c1, c2);
    const double ulp = std::nextafter(std::abs(a), INFINITY) - std::abs(a);
    worst = std::max(worst, std::abs(a - b) / ulp);
  }
  o.require(worst <= 2.0, fmt("recentering max error %.2f ulp over 10^4 draws", worst));
  const long n = 100000;
  std::uint64_t stream = 1;
  for (double L : {1.0, 2.0, 4.0}) {
    for (double N : {1.0, 4.0, 16.0}) {
      auto lat = FourierLattice::build(L, N);
      const double c = spectral::tadpole(L, N);
      const SeedSpec seed{2, stream++};
      std::vector<double> w2(n), w3(n);
      parallel_for(n, [&](std::size_t i) {
        const auto phi = spectral::sample_gff(lat, seed.child(i));
        w2[i] = spectral::l2_sq(phi) - c * L * L;
        w3[i] = spectral::cube_integral(phi) - 3.0 * c * phi.integral();
      });
      const auto a = moments(w2), b = moments(w3);
      o.require(std::abs(a.mean) <= 3.0 * a.stderr_ && std::abs(b.mean) <= 3.0 * b.stderr_,
                fmt("L=%g N=%g: mean int:phi^2: = %.3g (z=%.2f), mean int:phi^3: = %.3g (z=%.2f)", L, N, a.mean,
                    a.mean / a.stderr_, b.mean, b.mean / b.stderr_));
    }
  }
  return o;
}

// 3. Var(int :phi^2:) / L^2 and Var(int :phi^3:) / L^2 across L.
Outcome variance_scaling() {
  Outcome o;
  const long n = 1000;
  std::uint64_t stream = 0;
  for (double N : {2.0, 8.0, 32.0}) {
    std::vector<double> r2, r3;
    std::string row;
    for (double L : {1.0, 2.0, 4.0, 8.0}) {
      auto lat = FourierLattice::build(L, N);
      const double c = spectral::tadpole(L, N);
      const SeedSpec seed{3, stream++};
      std::vector<double> w2(n), w3(n);
      parallel_for(n, [&](std::size_t i) {
        const auto phi = spectral::sample_gff(lat, seed.child(i));
        w2[i] = spectral::l2_sq(phi) - c * L * L;
        w3[i] = spectral::cube_integral(phi) - 3.0 * c * phi.integral();
      });
      r2.push_back(moments(w2).var / (L * L));
      r3.push_back(moments(w3).var / (L * L));
      row += fmt(" L=%g: %.4g, %.4g;", L, r2.back(), r3.back());
    }
    const double s2 = *std::max_element(r2.begin(), r2.end()) / *std::min_element(r2.begin(), r2.end());
    const double s3 = *std::max_element(r3.begin(), r3.end()) / *std::min_element(r3.begin(), r3.end());
    o.require(s2 <= 2.0 && s3 <= 2.0, fmt("N=%g: max/min ratio %.3f (square), %.3f (cube)", N, s2, s3));
    o.note("Var/L^2 (square, cube):" + row);
  }
  return o;
}

// 4. Monte Carlo against quadrature on every truncation with at most 6 real dofs.
Outcome oracle_equivalence() {
  Outcome o;
  struct Trunc {
    double L, N;
  };
  const Trunc truncs[] = {{1.0, 0.5}, {1.0, 1.0}, {2.0, 0.5}};
  int worst_fail = 0;
  double worst_z = 0.0, worst_refine = 0.0;
  std::uint64_t stream = 0;
  for (const auto& t : truncs) {
    const auto lat = FourierLattice::build(t.L, t.N);
    int bad = 0;
    for (double sigma : {-1.0, 0.5, 1.0, 2.0}) {
      for (double A : {0.5, 1.0, 2.0}) {
        const auto p = InteractionParams::for_lattice(*lat, sigma, A);
        const auto q = free_energy::quadrature_partition(t.L, t.N, p, 30);
        const auto mc = free_energy::mc_partition(t.L, t.N, p, 100000, SeedSpec{4, stream++});
        const double z = std::abs(mc.log_z - q.log_z) / mc.stderr_;
        worst_z = std::max(worst_z, z);
        worst_refine = std::max(worst_refine, std::abs(q.correction));
        if (z > 3.0) {
          ++bad;
          o.note(fmt("L=%g N=%g sigma=%g A=%g: mc %.5f +- %.5f vs quadrature %.8f (z=%.2f)", t.L, t.N, sigma, A,
                     mc.log_z, mc.stderr_, q.log_z, z));
        }
      }
    }
    o.note(fmt("L=%g N=%g (%zu dofs): %d of 12 grid points beyond 3 stderr", t.L, t.N, lat->real_dofs(), bad));
    worst_fail += bad;
  }
  o.require(worst_fail == 0, fmt("MC within 3 stderr of quadrature at all 36 points (max z = %.2f)", worst_z));
  o.require(worst_refine <= 1e-6, fmt("quadrature order 30 vs 40 max difference %.2e", worst_refine));
  return o;
}

// 5. bd-lower <= MC <= bd-upper at N = 4.
Outcome variational_sandwich() {
  Outcome o;
  std::uint64_t stream = 0;
  for (double L : {1.0, 2.0}) {
    for (auto [sigma, A] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.2}, std::pair{-1.0, 0.5}}) {
      const auto p = params(L, 4.0, sigma, A);
      const SeedSpec seed{5, stream++};
      free_energy::BoundOptions b;
      b.N = 4.0;
      b.n_samples = 200;
      b.seed = seed.child(0);
      const auto lo = free_energy::bd_lower_bound(L, 1.0, 0.1, p, std::nullopt, b);
      free_energy::McOptions mo;
      mo.annealed = true;
      const auto mc = free_energy::mc_partition(L, 4.0, p, 100, seed.child(1), mo);
      b.seed = seed.child(2);
      const auto up = free_energy::bd_upper_bound(L, 1.0, p, std::nullopt, b);
      const bool ok = lo.log_z - mc.log_z <= 3.0 * std::hypot(lo.stderr_, mc.stderr_) &&
                      mc.log_z - up.log_z <= 3.0 * std::hypot(mc.stderr_, up.stderr_);
      o.require(ok, fmt("L=%g sigma=%g A=%g: lower %.3f +- %.3f <= mc %.3f +- %.3f <= upper %.3f +- %.3f", L, sigma, A,
                        lo.log_z, lo.stderr_, mc.log_z, mc.stderr_, up.log_z, up.stderr_));
    }
  }
  return o;
}

// Planar test fields: Gaussian bumps well inside a wide torus.
Field planar_field(const spectral::LatticePtr& lat, Rng& rng) {
  const double L = lat->L();
  std::vector<Complex> c(lat->size());
  const int bumps = 1 + static_cast<int>(rng.uniform() * 4.0);
  for (int b = 0; b < bumps; ++b) {
    const double w = 0.5 + 1.5 * rng.uniform();
    const double x1 = L / 2 + 2.0 * rng.normal(), x2 = L / 2 + 2.0 * rng.normal();
    const double amp = rng.normal();
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& m = lat->mode(i);
      const double g = 2.0 * std::numbers::pi * w * w *
                       std::exp(-2.0 * std::numbers::pi * std::numbers::pi * w * w * lat->freq_sq(i));
      c[i] += amp * g / L * std::polar(1.0, -2.0 * std::numbers::pi * (m.n1 * x1 + m.n2 * x2) / L);
    }
  }
  return Field(lat, std::move(c));
}

// 6. Ground state residual and the sharp GNS inequality.
Outcome ground_state() {
  Outcome o;
  const auto& Q = ground::ground_state();
  const double res = ground::ode_residual(Q);
  o.require(res <= 1e-6, fmt("ODE residual %.2e (Q(0) = %.10f, mass = %.10f)", res, Q.center_value, Q.mass));
  const double C = ground::gns_constant();
  const double at_Q = ground::gns_ratio(Q);
  o.require(std::abs(at_Q / C - 1.0) <= 0.01, fmt("ratio at Q %.6f vs constant %.6f", at_Q, C));
  auto lat = FourierLattice::build(16.0, 2.0);
  const Field q = ground::soliton_field(lat, 16.0, 1.0);
  const double at_Q_grid = ground::gns_ratio(q);
  Rng rng(SeedSpec{6, 0});
  int violations = 0;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double r = ground::gns_ratio(planar_field(lat, rng));
    worst = std::max(worst, r);
    violations += r > C;
  }
  double worst_perturbed = 0.0;
  for (int k = 0; k < 100; ++k) {
    Field f = planar_field(lat, rng);
    f *= 0.05 * std::sqrt(spectral::l2_sq(q) / spectral::l2_sq(f));
    f += q;
    worst_perturbed = std::max(worst_perturbed, ground::gns_ratio(f));
  }
  o.require(violations == 0, fmt("%d violations over 10^4 random fields (max ratio %.4f, C = %.4f)", violations, worst, C));
  o.require(at_Q_grid >= worst && at_Q_grid >= worst_perturbed * (1.0 - 1e-9) && std::abs(at_Q_grid / C - 1.0) <= 0.01,
            fmt("maximum at Q: %.6f (perturbations of Q max %.6f, random max %.6f)", at_Q_grid, worst_perturbed, worst));
  return o;
}

// 7. q^2 law, trivial minimizer above A*, negative energy below it.
Outcome critical_potential() {
  Outcome o;
  std::vector<double> ratios;
  for (double q : {0.5, 1.0, 2.0}) {
    const auto r = ground::constrained_minimize(q, 1.0);
    ratios.push_back(r.energy / (q * q));
    o.note(fmt("q=%g: H*_0,q = %.10f, H*/q^2 = %.10f", q, r.energy, ratios.back()));
  }
  const double spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end()) - 1.0;
  o.require(spread <= 0.02, fmt("H*_0,q / q^2 spread %.2e", spread));
  const double As = ground::critical_A();
  o.note(fmt("critical A = %.12f (closed form sigma^2/(8m) = %.12f)", As, ground::critical_A_closed_form()));

  auto lat = FourierLattice::build(16.0, 2.0);
  Rng rng(SeedSpec{7, 0});
  int trivial = 0, trivial_mass = 0;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    Field init = ground::random_test_field(lat, rng);
    init *= (0.1 + 0.9 * rng.uniform()) / spectral::sobolev_norm(init, 1.0);
    const auto r = ground::minimize_hamiltonian(init, 1.0, 2.0 * As);
    const double h1 = spectral::sobolev_norm(*r.field, 1.0);
    worst = std::max(worst, h1);
    trivial += h1 <= 1e-4 && r.energy >= 0.0;
    ground::DescentOptions with_mass;
    with_mass.include_mass = true;
    const auto m = ground::minimize_hamiltonian(init, 1.0, 2.0 * As, with_mass);
    trivial_mass += spectral::sobolev_norm(*m.field, 1.0) <= 1e-4 && m.energy >= 0.0;
    if (k == 0) {
      o.note(fmt("seed 0: final energy %.6e, constant-mode energy -sigma^4/(768 A^3 L^4) = %.6e", r.energy,
                 ground::constant_mode_energy(16.0, 1.0, 2.0 * As)));
    }
  }
  o.require(trivial == 10, fmt("A = 2 A*: %d of 10 descents reach ||phi||_H1 <= 1e-4 (max final norm %.4g)", trivial, worst));
  o.note(fmt("with the mass term 1/2 ||phi||^2 included: %d of 10 reach zero", trivial_mass));

  auto wide = FourierLattice::build(32.0, 1.5);
  double energy = 0.0;
  try {
    ground::DescentOptions d;
    d.max_iterations = 200;
    energy = ground::minimize_hamiltonian(ground::soliton_field(wide, 1.0, 1.0), 1.0, 0.5 * As, d).energy;
  } catch (const Divergence&) {
    energy = -1e10;
  }
  o.require(energy < 0.0, fmt("A = A*/2: soliton seed reaches energy %.6g", energy));
  return o;
}

// 8. H_L(phi_L) = L^4 H_{L^2}(phi).
Outcome scaling_identity() {
  Outcome o;
  Rng rng(SeedSpec{8, 0});
  double worst = 0.0;
  for (double L : {2.0, 4.0}) {
    auto lat = FourierLattice::build(L * L, 8.0 / L);
    for (int k = 0; k < 50; ++k) {
      const auto [a, b] = ground::check_scaling(ground::random_test_field(lat, rng), 1.0, 0.3);
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
    }
  }
  o.require(worst <= 1e-10, fmt("max relative difference %.2e over 100 fields", worst));
  return o;
}

// 9. |log Z_L| / L^4 decreasing in L at A = 2 A*.
Outcome free_energy_trend() {
  Outcome o;
  const double A = 2.0 * ground::critical_A();
  free_energy::McOptions mo;
  mo.annealed = true;
  const auto curve = free_energy::free_energy_curve({1.0, 2.0, 4.0, 8.0}, 4.0, 1.0, A, 64, SeedSpec{9, 0}, mo);
  for (const auto& r : curve.rows) {
    std::string flags;
    for (const auto& f : r.estimate.flags) flags += " " + f;
    o.note(fmt("L=%g log Z = %.4f +- %.4f, log Z / L^4 = %.6g +- %.2g [%s ]", r.estimate.L, r.estimate.log_z,
               r.estimate.stderr_, r.per_L4, r.per_L4_stderr, flags.c_str()));
  }
  std::string z;
  for (double v : curve.trend.z_scores) z += fmt(" %.1f", v);
  o.require(curve.trend.strictly_decreasing, "strictly decreasing beyond 3 combined stderr, z-scores:" + z);
  int unreliable = 0;
  for (const auto& r : curve.rows) unreliable += r.estimate.has_flag("weight-concentration");
  o.require(unreliable == 0, fmt("%d of %zu estimates flagged weight-concentration (stderr not meaningful)", unreliable,
                                 curve.rows.size()));
  // Schedule refinement at L = 1: a converged estimate does not move when the
  // number of temperatures is quadrupled.
  const auto p1 = params(1.0, 4.0, 1.0, A);
  for (int T : {400, 1600}) {
    auto m = mo;
    m.temperatures = T;
    const auto e = free_energy::mc_partition(1.0, 4.0, p1, 64, SeedSpec{9, 100}, m);
    o.note(fmt("L=1 with %d temperatures: log Z = %.4f +- %.4f", T, e.log_z, e.stderr_));
  }
  return o;
}

// 10. Norm tails nonincreasing in L and pairings decaying.
Outcome concentration_trend() {
  Outcome o;
  const double A = 2.0 * ground::critical_A();
  const std::vector<double> Ls{1.0, 2.0, 4.0, 8.0};
  const std::vector<double> eps{2.0, 5.0, 10.0, 20.0, 40.0};
  sampler::SamplerConfig sc;
  sc.thin = 5;
  std::vector<std::vector<sampler::ConcentrationReport>> reps;
  std::vector<double> mean_abs, se;
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const double L = Ls[i];
    auto lat = FourierLattice::build(L, 4.0);
    std::vector<std::pair<std::string, Field>> tests{{"bump", sampler::bump_test_function(lat, 0.4, L / 2, L / 2)}};
    const auto s = sampler::sample_concentration(L, 4.0, 0.5, 1.0, A, tests, sc, 10000, SeedSpec{10, i});
    reps.push_back(sampler::tail_reports(s, eps));
    mean_abs.push_back(s.pairings[0].mean_abs);
    se.push_back(s.pairings[0].stderr_);
    std::string tails;
    for (const auto& r : reps.back()) tails += fmt(" %.3f", r.tail_prob);
    o.note(fmt("L=%g: norm mean %.3f (ess %.0f), tails at eps {2,5,10,20,40}:%s, mean |<phi,g>| %.4g +- %.2g", L,
               s.norm_summary.mean, s.norm_summary.ess, tails.c_str(), mean_abs.back(), se.back()));
  }
  for (std::size_t e = 0; e < eps.size(); ++e) {
    bool ok = true;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
      for (std::size_t j = i + 1; j < Ls.size(); ++j) {
        const auto& a = reps[i][e];
        const auto& b = reps[j][e];
        ok = ok && b.tail_prob - a.tail_prob <= 3.0 * std::hypot(a.stderr_, b.stderr_);
      }
    }
    o.require(ok, fmt("eps=%g: tail probability nonincreasing in L beyond 3 sigma", eps[e]));
  }
  int low_ess = 0;
  for (const auto& r : reps)
    for (const auto& t : r) low_ess += std::count(t.flags.begin(), t.flags.end(), "ess-too-low") > 0;
  o.require(low_ess == 0, fmt("%d tail estimates flagged ess-too-low", low_ess));
  const auto fit = sampler::loglog_slope(Ls, mean_abs, se);
  o.require(fit.slope < 0.0, fmt("log-log slope of mean |<phi,g>| in L: %.3f +- %.3f", fit.slope, fit.stderr_));
  return o;
}

// 11. IMH and MALA moments against quadrature; free Langevin variance.
Outcome sampler_exactness() {
  Outcome o;
  auto lat = FourierLattice::build(1.0, 1.0);
  std::uint64_t stream = 0;
  for (auto [sigma, A] : {std::pair{1.0, 2.0}, std::pair{-1.0, 0.5}, std::pair{0.5, 1.0}}) {
    const auto p = InteractionParams::for_lattice(*lat, sigma, A);
    const double exact = free_energy::quadrature_moments(1.0, 1.0, p).mean_w2;
    for (auto k : {sampler::Kernel::Imh, sampler::Kernel::Mala}) {
      sampler::SamplerConfig sc;
      sc.kernel = k;
      auto h = sampler::run_chain(lat, p, sc, 100000, SeedSpec{11, stream++},
                                  {[&](const sampler::ChainState& s) { return sampler::wick_square_integral(s, p); }});
      const auto d = sampler::chain_diagnostics(h).observables[0];
      o.require(std::abs(d.mean - exact) <= 3.0 * d.stderr_,
                fmt("%s sigma=%g A=%g: E[int :phi^2:] %.5f +- %.5f vs quadrature %.6f", sampler::to_string(k), sigma, A,
                    d.mean, d.stderr_, exact));
    }
  }
  auto free_lat = FourierLattice::build(1.0, 2.0);
  std::vector<std::size_t> modes;
  std::vector<sampler::Observable> obs;
  for (std::size_t i = 0; i < free_lat->size(); ++i) {
    if (i != 0 && !free_lat->is_representative(i)) continue;
    modes.push_back(i);
    obs.push_back([i](const sampler::ChainState& s) { return std::norm(s.field[i]); });
  }
  sampler::SamplerConfig sc;
  sc.tau = 0.5;
  auto h = sampler::run_chain(free_lat, InteractionParams{}, sc, 100000, SeedSpec{11, stream++}, obs);
  const auto d = sampler::chain_diagnostics(h);
  int bad = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double expected = 1.0 / free_lat->bracket_sq(modes[j]);
    const double z = std::abs(d.observables[j].mean - expected) / d.observables[j].stderr_;
    worst = std::max(worst, z);
    bad += z > 3.0;
  }
  o.require(bad == 0, fmt("OU variance <lambda>^-2 on %zu modes, max z = %.2f", modes.size(), worst));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "tadpole law", 1.0, tadpole_law},
      {2, "Wick identities", 120.0, wick_identities},
      {3, "variance scaling", 300.0, variance_scaling},
      {4, "oracle equivalence", 300.0, oracle_equivalence},
      {5, "variational sandwich", 600.0, variational_sandwich},
      {6, "ground state", 60.0, ground_state},
      {7, "critical potential", 300.0, critical_potential},
      {8, "scaling identity", 10.0, scaling_identity},
      {9, "free-energy trend", 1800.0, free_energy_trend},
      {10, "concentration trend", 1800.0, concentration_trend},
      {11, "sampler exactness", 600.0, sampler_exactness},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_seconds, fmt("runtime %.1f s (budget %.0f s)", secs, c.budget_seconds));
    failures += !o.pass;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

#include <cmath>

#include "phi3/errors.hpp"
#include "phi3/free_energy/free_energy.hpp"
#include "phi3/parallel.hpp"
#include "phi3/sampler/kernels.hpp"
#include "phi3/spectral/gff.hpp"

namespace phi3::free_energy {

using spectral::FourierLattice;

namespace {

FreeEnergyEstimate blank(double L, double N, const InteractionParams& p, Method m) {
  FreeEnergyEstimate e;
  e.method = m;
  e.L = L;
  e.N = N;
  e.sigma = p.sigma;
  e.A = p.A;
  return e;
}

// Tune the MALA step on a pilot chain at beta = 1 that is independent of the
// annealing chains, so every annealing transition uses a fixed kernel.
double pilot_tau(const spectral::LatticePtr& lat, const InteractionParams& p, const SeedSpec& seed, double tau) {
  Rng rng(seed);
  sampler::Target target{p, 1.0, {}};
  auto state = sampler::ChainState::at(spectral::sample_gff(lat, rng), p);
  for (int block = 0; block < 8; ++block) {
    const long acc = state.accept_count;
    for (int k = 0; k < 50; ++k) sampler::langevin_step(state, tau, target, rng);
    const double rate = static_cast<double>(state.accept_count - acc) / 50.0;
    tau *= std::exp(std::clamp(2.0 * (rate - 0.65), -1.0, 1.0));
  }
  return tau;
}

FreeEnergyEstimate annealed(const spectral::LatticePtr& lat, const InteractionParams& p, long chains,
                            const SeedSpec& seed, const McOptions& opts) {
  auto est = blank(lat->L(), lat->N(), p, Method::Mc);
  est.flags.push_back("annealed");
  const double tau = pilot_tau(lat, p, SeedSpec{seed.derived(), 0xA15}, opts.tau);
  const int K = opts.temperatures;
  std::vector<double> logw(static_cast<std::size_t>(chains));
  std::vector<double> acc(static_cast<std::size_t>(chains));
  parallel_for(static_cast<std::size_t>(chains), [&](std::size_t c) {
    Rng rng(seed.child(c));
    auto state = sampler::ChainState::at(spectral::sample_gff(lat, rng), p);
    double w = 0.0;
    double beta_prev = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double x = static_cast<double>(k) / K;
      const double beta = x * x;
      w -= (beta - beta_prev) * state.potential.total;
      beta_prev = beta;
      sampler::Target target{p, beta, {}};
      for (int s = 0; s < opts.steps_per_temperature; ++s) sampler::langevin_step(state, tau, target, rng);
      if (opts.zero_mode_moves) sampler::zero_mode_slice_step(state, target, rng);
    }
    logw[c] = w;
    acc[c] = static_cast<double>(state.accept_count) / static_cast<double>(std::max<long>(1, state.step_count));
  });
  const auto lm = log_mean_exp(logw);
  est.log_z = lm.value;
  est.stderr_ = lm.stderr_;
  est.n_samples = chains;
  if (lm.top_share > 0.5) est.flags.push_back("weight-concentration");
  double mean_acc = 0.0;
  for (double a : acc) mean_acc += a / static_cast<double>(chains);
  if (mean_acc < 0.05) est.flags.push_back("rejection-storm");
  return est;
}

}  // namespace

FreeEnergyEstimate mc_partition(double L, double N, const InteractionParams& params, long n_samples,
                                const SeedSpec& seed, const McOptions& opts) {
  if (n_samples < 1) throw Error("mc_partition: n_samples must be positive");
  auto lat = FourierLattice::build(L, N);
  if (opts.annealed) return annealed(lat, params, n_samples, seed, opts);

  auto est = blank(L, N, params, Method::Mc);
  std::vector<double> logw;
  long n = n_samples;
  for (;;) {
    const std::size_t start = logw.size();
    logw.resize(static_cast<std::size_t>(n));
    parallel_for(logw.size() - start, [&](std::size_t k) {
      const std::size_t i = start + k;
      const Field phi = spectral::sample_gff(lat, seed.child(i));
      logw[i] = -wick::interaction(phi, params).total;
    });
    const auto lm = log_mean_exp(logw);
    est.log_z = lm.value;
    est.stderr_ = lm.stderr_;
    est.n_samples = n;
    if (lm.top_share <= 0.5) break;
    if (2 * n > opts.max_samples) {
      est.flags.push_back("weight-concentration");
      break;
    }
    n *= 2;
  }
  if (n > n_samples) est.flags.push_back("resampled");
  return est;
}

}  // namespace phi3::free_energy

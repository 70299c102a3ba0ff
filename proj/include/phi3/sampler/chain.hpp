#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "phi3/sampler/kernels.hpp"

namespace phi3::sampler {

enum class Kernel { Imh, Mala, Tamed };

const char* to_string(Kernel k);

struct SamplerConfig {
  Kernel kernel = Kernel::Mala;
  double tau = 0.1;              // Langevin step
  long min_burn_in = 1000;       // steps
  double burn_in_tau_factor = 10.0;
  long max_burn_in = 200000;
  int thin = 1;                  // record every thin-th step
  bool adapt_tau = true;         // tune tau during burn-in toward ~0.57 acceptance
  spectral::GffOptions gff;
};

/// Scalar observables recorded per kept step.
using Observable = std::function<double(const ChainState&)>;

struct ChainHistory {
  std::vector<std::vector<double>> series;  // one row per observable
  std::vector<Field> fields;                // kept fields when requested
  long steps = 0;
  long accepts = 0;
  long burn_in = 0;
  double tau = 0.0;  // final Langevin step after adaptation
  std::vector<std::string> warnings;
};

/// Burn-in of max(min_burn_in, burn_in_tau_factor x tau_int(int :phi^2:)) steps,
/// re-estimated until satisfied, then `n_keep` recorded steps.
ChainHistory run_chain(const spectral::LatticePtr& lattice, const InteractionParams& params,
                       const SamplerConfig& config, long n_keep, const SeedSpec& seed,
                       const std::vector<Observable>& observables, bool keep_fields = false);

/// Integral of :phi^2: for the chain's current field.
double wick_square_integral(const ChainState& s, const InteractionParams& params);

struct SeriesSummary {
  double mean = 0.0;
  double variance = 0.0;
  double tau_int = 0.0;  // integrated autocorrelation time, 1 for i.i.d.
  double ess = 0.0;
  double stderr_ = 0.0;  // sqrt(variance tau_int / n)
  bool infinite_tau = false;
};

/// Sokal's windowed estimator: tau = 1 + 2 sum_{t=1}^{W} rho(t), with the
/// smallest W >= c tau(W), c = 5. A constant series gives infinite_tau.
SeriesSummary summarize_series(const std::vector<double>& x, double window_c = 5.0);

struct ChainDiagnostics {
  double acceptance = 0.0;
  std::vector<SeriesSummary> observables;
};

/// Throws if any series has fewer than 100 entries.
ChainDiagnostics chain_diagnostics(const ChainHistory& history);

/// Chain checkpoint: the field in the binary container plus "<path>.counters"
/// with step_count, accept_count and the potential.
void save_checkpoint(const std::filesystem::path& path, const ChainState& state);
ChainState load_checkpoint(const std::filesystem::path& path, const InteractionParams& params);

}  // namespace phi3::sampler

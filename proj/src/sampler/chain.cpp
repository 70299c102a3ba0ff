#include "phi3/sampler/chain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "phi3/errors.hpp"
#include "phi3/spectral/field_io.hpp"

namespace phi3::sampler {

const char* to_string(Kernel k) {
  switch (k) {
    case Kernel::Imh:
      return "imh";
    case Kernel::Mala:
      return "mala";
    case Kernel::Tamed:
      return "tamed";
  }
  return "?";
}

double wick_square_integral(const ChainState& s, const InteractionParams& params) {
  const double L = s.field.lattice().L();
  return spectral::l2_sq(s.field) - params.wick_constant * L * L;
}

SeriesSummary summarize_series(const std::vector<double>& x, double window_c) {
  SeriesSummary s;
  const std::size_t n = x.size();
  if (n == 0) return s;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  s.mean = mean;
  s.variance = c0;
  if (!(c0 > 1e-300 * std::max(1.0, mean * mean))) {
    s.infinite_tau = true;
    s.tau_int = std::numeric_limits<double>::infinity();
    s.ess = 0.0;
    s.stderr_ = 0.0;
    return s;
  }
  double tau = 1.0;
  for (std::size_t t = 1; t < n / 2; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) ct += (x[i] - mean) * (x[i + t] - mean);
    ct /= static_cast<double>(n);
    tau += 2.0 * ct / c0;
    if (static_cast<double>(t) >= window_c * tau) break;
  }
  tau = std::max(tau, 1e-3);
  s.tau_int = tau;
  s.ess = static_cast<double>(n) / tau;
  s.stderr_ = std::sqrt(c0 * tau / static_cast<double>(n));
  return s;
}

ChainDiagnostics chain_diagnostics(const ChainHistory& h) {
  ChainDiagnostics d;
  d.acceptance = h.steps > 0 ? static_cast<double>(h.accepts) / static_cast<double>(h.steps) : 0.0;
  for (const auto& series : h.series) {
    if (series.size() < 100) throw Error("chain_diagnostics: history shorter than 100");
    d.observables.push_back(summarize_series(series));
  }
  return d;
}

namespace {

void advance(ChainState& s, const Target& target, const SamplerConfig& c, double tau, Rng& rng) {
  switch (c.kernel) {
    case Kernel::Imh:
      imh_step(s, target, rng);
      break;
    case Kernel::Mala:
      langevin_step(s, tau, target, rng, {true});
      break;
    case Kernel::Tamed:
      langevin_step(s, tau, target, rng, {false});
      break;
  }
}

}  // namespace

ChainHistory run_chain(const spectral::LatticePtr& lattice, const InteractionParams& params,
                       const SamplerConfig& config, long n_keep, const SeedSpec& seed,
                       const std::vector<Observable>& observables, bool keep_fields) {
  Rng rng(seed);
  Target target{params, 1.0, config.gff};
  ChainState state = ChainState::at(spectral::sample_gff(lattice, rng, config.gff), params);
  double tau = config.tau;

  // Burn-in with adaptive length and, for MALA, step-size tuning in blocks.
  std::vector<double> trace;
  long done = 0;
  long target_len = config.min_burn_in;
  long block_steps = 0, block_acc = 0;
  while (done < target_len) {
    const long acc_before = state.accept_count;
    advance(state, target, config, tau, rng);
    ++done;
    trace.push_back(wick_square_integral(state, params));
    block_acc += state.accept_count - acc_before;
    if (++block_steps == 100) {
      if (config.adapt_tau && config.kernel == Kernel::Mala && done <= target_len / 2 + 100) {
        const double rate = static_cast<double>(block_acc) / 100.0;
        tau *= std::exp(std::clamp(2.0 * (rate - 0.57), -1.0, 1.0));
      }
      block_steps = block_acc = 0;
    }
    if (done == target_len) {
      const auto s = summarize_series(std::vector<double>(trace.begin() + static_cast<long>(trace.size()) / 2, trace.end()));
      const double tau_int = s.infinite_tau ? static_cast<double>(config.max_burn_in) : s.tau_int;
      const long wanted = std::max(config.min_burn_in, static_cast<long>(std::ceil(config.burn_in_tau_factor * tau_int)));
      if (wanted > done) target_len = std::min(config.max_burn_in, std::max(wanted, 2 * done));
    }
  }

  ChainHistory h;
  h.burn_in = done;
  h.tau = tau;
  h.series.assign(observables.size(), {});
  const long acc0 = state.accept_count;
  const long steps0 = state.step_count;
  for (long k = 0; k < n_keep; ++k) {
    for (int t = 0; t < std::max(1, config.thin); ++t) advance(state, target, config, tau, rng);
    for (std::size_t j = 0; j < observables.size(); ++j) h.series[j].push_back(observables[j](state));
    if (keep_fields) h.fields.push_back(state.field);
  }
  h.steps = state.step_count - steps0;
  h.accepts = state.accept_count - acc0;
  if (config.kernel != Kernel::Tamed && h.steps > 0 && static_cast<double>(h.accepts) < 0.05 * h.steps) {
    h.warnings.push_back("acceptance below 5%");
  }
  if (done >= config.max_burn_in) h.warnings.push_back("burn-in capped");
  return h;
}

void save_checkpoint(const std::filesystem::path& path, const ChainState& state) {
  spectral::save_fields(path, {state.field});
  std::ofstream out(path.string() + ".counters");
  if (!out) throw Error("cannot write checkpoint counters");
  out.precision(17);
  out << "step_count=" << state.step_count << "\naccept_count=" << state.accept_count
      << "\npotential_total=" << state.potential.total << "\n";
}

ChainState load_checkpoint(const std::filesystem::path& path, const InteractionParams& params) {
  auto fields = spectral::load_fields(path);
  if (fields.size() != 1) throw FormatError("checkpoint must contain exactly one field");
  ChainState s = ChainState::at(fields.front(), params);
  std::ifstream in(path.string() + ".counters");
  if (!in) throw FormatError("missing checkpoint counters");
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "step_count") s.step_count = std::stol(val);
    if (key == "accept_count") s.accept_count = std::stol(val);
  }
  if (s.accept_count < 0 || s.accept_count > s.step_count) throw FormatError("checkpoint counters inconsistent");
  return s;
}

}  // namespace phi3::sampler

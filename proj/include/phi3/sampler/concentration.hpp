#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phi3/sampler/chain.hpp"

namespace phi3::sampler {

struct PairingStat {
  std::string id;
  double mean_abs = 0.0;  // E|<phi, g>|
  double stderr_ = 0.0;
};

struct ConcentrationReport {
  double L = 0.0, N = 0.0, eta = 0.0, epsilon = 0.0;
  double tail_prob = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
  bool censored = false;  // tail_prob is the upper bound 10 / n
  std::vector<PairingStat> pairings;
  std::vector<std::string> flags;
};

/// Everything measured on one chain: the rescaled norm series and one
/// |<phi, g_j>| series per test function.
struct ConcentrationSample {
  double L = 0.0, N = 0.0, eta = 0.0;
  std::vector<double> norms;  // ||L^-2 phi(./L)||_{H^-eta(T^2_{L^2})}
  SeriesSummary norm_summary;
  std::vector<PairingStat> pairings;
  std::vector<std::string> warnings;
};

/// Gibbs parameters for the lattice, with the massless Wick constant when the
/// reference measure is the mean-zero massless field.
InteractionParams concentration_params(const spectral::FourierLattice& lattice, double sigma, double A,
                                       const SamplerConfig& config);

/// The rescaled norm: sobolev_norm(rescale_down(phi), -eta), or the
/// homogeneous norm in the massless variant.
double rescaled_norm(const Field& phi, double eta, bool massless);

ConcentrationSample sample_concentration(double L, double N, double eta, double sigma, double A,
                                         const std::vector<std::pair<std::string, Field>>& tests,
                                         const SamplerConfig& config, long n, const SeedSpec& seed);

/// Tail reports for each epsilon on the same sample set, so tail_prob is
/// exactly nonincreasing in epsilon. Below 10 / n the estimate is censored.
std::vector<ConcentrationReport> tail_reports(const ConcentrationSample& s, const std::vector<double>& epsilons);

ConcentrationReport estimate_norm_tail(double L, double N, double eta, double epsilon, double sigma, double A,
                                       const SamplerConfig& config, long n, const SeedSpec& seed);

ConcentrationReport pairing_statistics(double L, double N, const std::vector<std::pair<std::string, Field>>& tests,
                                       double sigma, double A, const SamplerConfig& config, long n,
                                       const SeedSpec& seed);

/// Same tail from independent draws of the reference Gaussian (no chain).
ConcentrationReport gff_norm_tail(double L, double N, double eta, double epsilon, long n, const SeedSpec& seed,
                                  const spectral::GffOptions& gff = {});

/// P_N of the radial bump exp(1 - 1 / (1 - |x - x0|^2 / r^2)), supported in
/// the disc of radius r around x0, via its Hankel transform.
Field bump_test_function(const spectral::LatticePtr& lattice, double radius, double x0 = 0.0, double y0 = 0.0);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};

/// Weighted least squares of log y on log x with Var(log y) = (se / y)^2.
SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se);

/// CSV `L,N,eta,epsilon,tail_prob,stderr,ess,flags,config_hash`.
void write_concentration_csv(const std::filesystem::path& path, const std::vector<ConcentrationReport>& rows,
                             const std::string& config_hash);

}  // namespace phi3::sampler

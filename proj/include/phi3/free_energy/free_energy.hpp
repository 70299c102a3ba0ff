#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phi3/spectral/field.hpp"
#include "phi3/spectral/seed.hpp"
#include "phi3/wick/interaction.hpp"

namespace phi3::free_energy {

using spectral::Field;
using wick::InteractionParams;

enum class Method { Mc, Quadrature, BdUpper, BdLower, BdOptimized };

const char* to_string(Method m);

struct FreeEnergyEstimate {
  double log_z = 0.0;
  double stderr_ = 0.0;
  Method method = Method::Mc;
  double L = 0.0;
  double N = 0.0;
  double sigma = 0.0;
  double A = 0.0;
  long n_samples = 0;
  std::vector<std::string> flags;
  // Bound decomposition where it applies (NaN otherwise).
  double deterministic = std::numeric_limits<double>::quiet_NaN();
  double correction = std::numeric_limits<double>::quiet_NaN();
  std::optional<Field> optimizer;  // Theta* of optimize_drift

  bool has_flag(const std::string& f) const;
};

/// Pairwise log-sum-exp of the values after sorting them, so the result does not
/// depend on the order (or partitioning) of the inputs.
double log_sum_exp(std::vector<double> values);

/// log mean exp(w) with the delta-method standard error sd(e^w) / (sqrt(n) mean(e^w)).
struct LogMean {
  double value;
  double stderr_;
  double top_share;  // share of the sum carried by the largest 1% of weights
};
LogMean log_mean_exp(const std::vector<double>& log_weights);

struct McOptions {
  /// Direct importance sampling from the reference Gaussian; when more than half
  /// the weight sits in the top 1%, rerun with doubled samples up to
  /// max_samples and flag "weight-concentration".
  long max_samples = 1 << 20;
  /// Annealed importance sampling with MALA transitions between tempered
  /// targets exp(-beta V); the estimate keeps method "mc" with flag "annealed".
  bool annealed = false;
  int temperatures = 400;
  int steps_per_temperature = 2;
  bool zero_mode_moves = true;  // exact zero-mode slice update after each temperature
  double tau = 0.2;
};

/// log Z_{L,N} = log E_mu[exp(-V_N)], sample i drawn from seed.child(i). For
/// annealed runs n_samples is the number of independent annealing chains.
FreeEnergyEstimate mc_partition(double L, double N, const InteractionParams& params, long n_samples,
                                const SeedSpec& seed, const McOptions& opts = {});

/// Tensor Gauss-Legendre evaluation of E_mu[exp(-V_N)] over the zero mode and
/// the pair moduli (<= 6 real dofs), on windows fitted to the integrand. Evaluated at `order` and `order + 10`; flags "refinement-unstable"
/// when they differ by more than 1e-6. Throws TooManyDofs, and
/// DivergentIntegral when A = 0 and sigma != 0 (the cubic is unbounded below).
FreeEnergyEstimate quadrature_partition(double L, double N, const InteractionParams& params, int order = 30);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Expectation under the oracle: E[f exp(-V)] / E[exp(-V)] for f = int :phi^2:
/// and its square; used as sampler ground truth.
struct OracleMoments {
  double log_z;
  double mean_w2;     // E_rho[int :phi^2:]
  double mean_w2_sq;  // E_rho[(int :phi^2:)^2]
};
OracleMoments quadrature_moments(double L, double N, const InteractionParams& params, int order = 30);

struct BoundOptions {
  double N = 4.0;          // lattice cutoff of log Z_{L,N}
  long n_samples = 400;
  double delta = 0.05;     // upper bound splitting constant
  double epsilon = 0.1;    // lower bound drift window
  int inner_iterations = 400;
  SeedSpec seed{};
};

/// Pathwise Boue-Dupuis upper bound. With phi = X + Z, Z = P_M phi:
///   log Z <= E[ sup_{W'} ( -V_N(X + W') - (1-delta)/2 ||W'||_{H^1}^2 ) ]
///            + (1/(2 delta) - 1/2) E||Z||_{H^1}^2,
/// the inner sup by multi-start preconditioned ascent (starts: W_L = L^2 W(L .),
/// Z, 0). deterministic = -L^4 H^delta_{L^2}(W), correction = bound - deterministic.
/// W lives on T^2_{L^2}; an empty optional means W = 0. Throws DivergentIntegral
/// when A = 0 and sigma != 0.
FreeEnergyEstimate bd_upper_bound(double L, double M, const InteractionParams& params,
                                  const std::optional<Field>& W, const BoundOptions& opts = {});

/// Lower bound from the explicit drift that, during the last epsilon of the
/// heat-flow time, steers the low modes Z_{1-eps} onto W_L:
///   log Z >= E[-V_N(X + I + W_L)] - E||W_L - Z_{1-eps}||_{H^1}^2 / (2 eps),
/// where I is the low-mode increment over the window. The field X + I has
/// variance tadpole(L,N) - C_M with C_M = (1 - eps) tadpole(L,M); the Wick
/// powers are evaluated through that recentering and cross-checked directly.
FreeEnergyEstimate bd_lower_bound(double L, double M, double epsilon, const InteractionParams& params,
                                  const std::optional<Field>& W, const BoundOptions& opts = {});

/// C_M = (1 - eps) tadpole(L, M), the variance removed from the low modes at the
/// start of the drift window.
double counterterm(double L, double M, double epsilon);

struct DriftOptions {
  long batch = 128;          // sample-average batch
  long eval_samples = 1000;  // fresh samples for the reported bound
  double tolerance = 1e-6;
};

/// Deterministic drift Theta minimizing J = E[V_N(phi + Theta)] + 1/2 ||Theta||_{H^1}^2
/// on a fixed batch (sample average), then log Z >= -J(Theta*) re-estimated on
/// fresh samples. Throws NonConvergence if iters is exhausted.
FreeEnergyEstimate optimize_drift(double L, double N, const InteractionParams& params, int iters,
                                  const SeedSpec& seed, const DriftOptions& opts = {});

struct CurveRow {
  FreeEnergyEstimate estimate;
  double per_L4 = 0.0;
  double per_L4_stderr = 0.0;
};

struct CurveTrend {
  bool strictly_decreasing = false;  // |log Z| / L^4 drops by > 3 combined stderr at each step
  std::vector<double> z_scores;
};

struct FreeEnergyCurve {
  std::vector<CurveRow> rows;
  CurveTrend trend;
};

/// Row i uses mc_partition(L_i, N, tadpole-matched params, budget, seed.child(i), opts).
FreeEnergyCurve free_energy_curve(const std::vector<double>& L_list, double N, double sigma, double A, long budget,
                                  const SeedSpec& seed, const McOptions& opts = {});

CurveTrend decreasing_trend(const std::vector<CurveRow>& rows);

/// Header `L,N,sigma,A,method,log_z,stderr,log_z_per_L4,flags,config_hash`.
void write_curve_csv(const std::filesystem::path& path, const std::vector<FreeEnergyEstimate>& rows,
                     const std::string& config_hash);

}  // namespace phi3::free_energy

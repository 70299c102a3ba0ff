#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phi3::experiment {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"tadpole-scan", "gff-stats", "wick-check", "ground-state", "critical-a",
                                          "free-energy",  "sandwich",  "sample",     "concentrate",  "oracle"};
  return c;
}

struct ExperimentFlags {
  bool massless_mean_zero = false;
  bool mala = true;  // Langevin kernel with Metropolis correction; false uses IMH for `sample`
};

/// Text format: flat `key = value` lines, `[section]` headers, `#` or `;`
/// comments, lists comma separated. Keys:
///   command, seed, output_path
///   [lattice]        L_list, N_list
///   [model]          sigma, A, A_over_critical (A = factor x critical_A(sigma) when > 0)
///   [sampling]       n_samples, annealed, massless_mean_zero, mala, thin
///   [concentration]  eta, epsilon_list, test_functions, bump_radius
///   [bounds]         recenter_cutoff, delta, epsilon
///   [oracle]         quadrature_order
struct ExperimentConfig {
  std::string command;  // may be left empty and supplied on the command line
  std::uint64_t seed = 0;
  std::string output_path = "out";

  std::vector<double> L_list{1.0};
  std::vector<double> N_list{4.0};

  double sigma = 1.0;
  double A = 1.0;
  double A_over_critical = 0.0;

  long n_samples = 1000;
  bool annealed = false;
  int thin = 1;
  ExperimentFlags flags;

  double eta = 0.5;
  std::vector<double> epsilon_list{1.0};
  int test_functions = 1;  // m, bumps placed along the diagonal
  double bump_radius = 0.4;

  double recenter_cutoff = 1.0;
  double delta = 0.05;
  double bound_epsilon = 0.1;

  int quadrature_order = 30;

  /// A with A_over_critical resolved.
  double effective_A() const;
  /// Soft warnings (e.g. the sigma = 0 Gaussian baseline).
  std::vector<std::string> notes() const;
};

/// Throws ConfigError listing every unknown-key, type-mismatch and
/// constraint-violation problem found.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text: every key, shortest round-trip number formatting.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace phi3::experiment

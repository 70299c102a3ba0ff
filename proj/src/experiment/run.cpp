#include "phi3/experiment/run.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <typeinfo>

#include <boost/core/demangle.hpp>
#include "json.hpp"

#include "phi3/free_energy/free_energy.hpp"
#include "phi3/ground/hamiltonian.hpp"
#include "phi3/ground/radial.hpp"
#include "phi3/parallel.hpp"
#include "phi3/sampler/chain.hpp"
#include "phi3/sampler/concentration.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/lattice.hpp"
#include "phi3/wick/hermite.hpp"
#include "phi3/wick/interaction.hpp"

#ifndef PHI3_VERSION
#define PHI3_VERSION "unknown"
#endif

namespace phi3::experiment {

const char* code_version() { return PHI3_VERSION; }

namespace {

namespace fs = std::filesystem;
using spectral::FourierLattice;
using wick::InteractionParams;

// Shortest round-trip formatting, so equal numbers give equal bytes.
std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Csv {
 public:
  Csv(const fs::path& path, const std::string& header) : out_(path) {
    if (!out_) throw Error("cannot write " + path.string());
    out_ << header << ",config_hash\n";
  }
  template <class... T>
  void row(const std::string& hash, const T&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << ',' << hash << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::ofstream out_;
};

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
  return s;
}

struct Task {
  double L, N;
  std::uint64_t stream;
  std::string name;
};

struct Context {
  const ExperimentConfig& cfg;
  fs::path dir;
  std::string hash;
  RunManifest& manifest;

  std::vector<Task> grid() const {
    std::vector<Task> t;
    for (double L : cfg.L_list)
      for (double N : cfg.N_list) {
        const auto k = static_cast<std::uint64_t>(t.size());
        t.push_back({L, N, k, cfg.command + "[L=" + num(L) + ",N=" + num(N) + "]"});
      }
    return t;
  }
  SeedSpec seed_for(const Task& t) {
    manifest.seeds.push_back({t.name, cfg.seed, t.stream});
    return SeedSpec{cfg.seed, t.stream};
  }
  fs::path output(const std::string& name) {
    manifest.outputs.push_back(name);
    return dir / name;
  }
  double A() const { return cfg.effective_A(); }
};

template <class F>
void guarded(const std::string& task, F&& body) {
  try {
    body();
  } catch (const TaskError&) {
    throw;
  } catch (const std::exception& e) {
    throw TaskError(task, boost::core::demangle(typeid(e).name()), e.what());
  }
}

struct Moments {
  double mean, stderr_, var;
};
Moments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  const double var = n > 1 ? s / (n - 1) : 0.0;
  return {m, std::sqrt(var / n), var};
}

// int :phi^2: and int :phi^3: of n GFF draws of one task.
std::pair<std::vector<double>, std::vector<double>> wick_integrals(const Task& t, long n, const SeedSpec& seed) {
  auto lat = FourierLattice::build(t.L, t.N);
  const double c = spectral::tadpole(t.L, t.N);
  std::vector<double> w2(static_cast<std::size_t>(n)), w3(w2.size());
  parallel_for(w2.size(), [&](std::size_t i) {
    const auto phi = spectral::sample_gff(lat, seed.child(i));
    w2[i] = spectral::l2_sq(phi) - c * t.L * t.L;
    w3[i] = wick::interaction(phi, InteractionParams{3.0, 0.0, c}).cubic;
  });
  return {std::move(w2), std::move(w3)};
}

void tadpole_scan(Context& x) {
  Csv csv(x.output("tadpole.csv"), "L,N,tadpole,tadpole_massless");
  for (const auto& t : x.grid()) {
    guarded(t.name, [&] { csv.row(x.hash, t.L, t.N, spectral::tadpole(t.L, t.N), spectral::tadpole_massless(t.L, t.N)); });
  }
}

void gff_stats(Context& x) {
  Csv csv(x.output("gff_stats.csv"),
          "L,N,n,mean_w2,stderr_w2,var_w2,var_w2_per_L2,mean_w3,stderr_w3,var_w3,var_w3_per_L2");
  for (const auto& t : x.grid()) {
    guarded(t.name, [&] {
      const auto [w2, w3] = wick_integrals(t, x.cfg.n_samples, x.seed_for(t));
      const auto a = moments(w2), b = moments(w3);
      const double area = t.L * t.L;
      csv.row(x.hash, t.L, t.N, x.cfg.n_samples, a.mean, a.stderr_, a.var, a.var / area, b.mean, b.stderr_, b.var,
              b.var / area);
    });
  }
}

void wick_check(Context& x) {
  Csv csv(x.output("wick_check.csv"), "L,N,n,mean_w2,z_w2,mean_w3,z_w3");
  const auto tasks = x.grid();
  for (const auto& t : tasks) {
    guarded(t.name, [&] {
      const auto [w2, w3] = wick_integrals(t, x.cfg.n_samples, x.seed_for(t));
      const auto a = moments(w2), b = moments(w3);
      csv.row(x.hash, t.L, t.N, x.cfg.n_samples, a.mean, a.mean / a.stderr_, b.mean, b.mean / b.stderr_);
    });
  }
  Task rt{0, 0, static_cast<std::uint64_t>(tasks.size()), "wick-check[recentering]"};
  guarded(rt.name, [&] {
    Rng rng(x.seed_for(rt));
    double worst = 0.0;
    for (long i = 0; i < x.cfg.n_samples; ++i) {
      const int k = 1 + static_cast<int>(rng.bits() % 3);
      const double v = -10.0 + 20.0 * rng.uniform(), c1 = 20.0 * rng.uniform(), c2 = 20.0 * rng.uniform();
      const double a = wick::hermite(k, v, c1), b = wick::recenter(k, v, c1, c2);
      const double ulp = std::nextafter(std::abs(a), INFINITY) - std::abs(a);
      worst = std::max(worst, std::abs(a - b) / ulp);
    }
    Csv r(x.output("recentering.csv"), "n,max_ulp_error");
    r.row(x.hash, x.cfg.n_samples, worst);
  });
}

void ground_state(Context& x) {
  guarded("ground-state", [&] {
    const auto& q = ground::ground_state();
    ground::write_profile_csv(x.output("ground_state_profile.csv"), q);
    Csv csv(x.output("ground_state.csv"), "center_value,mass,mass_alt,gns_constant,ode_residual,gns_ratio_at_Q");
    csv.row(x.hash, q.center_value, q.mass, q.mass_alt, ground::gns_constant(), ground::ode_residual(q),
            ground::gns_ratio(q));
  });
}

void critical_a(Context& x) {
  const double sigma = x.cfg.sigma == 0.0 ? 1.0 : x.cfg.sigma;
  Csv csv(x.output("critical_a.csv"), "q,H_star,H_star_over_q2,iterations,converged");
  for (double q : {0.5, 1.0, 2.0}) {
    guarded("critical-a[q=" + num(q) + "]", [&] {
      const auto r = ground::constrained_minimize(q, sigma);
      csv.row(x.hash, q, r.energy, r.energy / (q * q), r.iterations, r.converged);
    });
  }
  guarded("critical-a[summary]", [&] {
    Csv s(x.output("critical_a_summary.csv"), "sigma,critical_A,closed_form,relative_difference");
    const double a = ground::critical_A(sigma), b = ground::critical_A_closed_form(sigma);
    s.row(x.hash, sigma, a, b, std::abs(a - b) / b);
  });
}

void free_energy_cmd(Context& x) {
  std::vector<free_energy::FreeEnergyEstimate> rows;
  Csv trend(x.output("free_energy_trend.csv"), "N,strictly_decreasing,z_scores");
  free_energy::McOptions opts;
  opts.annealed = x.cfg.annealed;
  for (std::size_t k = 0; k < x.cfg.N_list.size(); ++k) {
    const double N = x.cfg.N_list[k];
    Task t{0, N, k, "free-energy[N=" + num(N) + "]"};
    guarded(t.name, [&] {
      const auto curve = free_energy::free_energy_curve(x.cfg.L_list, N, x.cfg.sigma, x.A(), x.cfg.n_samples,
                                                        x.seed_for(t), opts);
      for (const auto& r : curve.rows) rows.push_back(r.estimate);
      std::string z;
      for (double v : curve.trend.z_scores) z += (z.empty() ? "" : ";") + num(v);
      trend.row(x.hash, N, curve.trend.strictly_decreasing, z);
    });
  }
  free_energy::write_curve_csv(x.output("free_energy.csv"), rows, x.hash);
}

void sandwich(Context& x) {
  std::vector<free_energy::FreeEnergyEstimate> rows;
  for (const auto& t : x.grid()) {
    guarded(t.name, [&] {
      const SeedSpec seed = x.seed_for(t);
      auto lat = FourierLattice::build(t.L, t.N);
      const auto p = InteractionParams::for_lattice(*lat, x.cfg.sigma, x.A());
      free_energy::BoundOptions b;
      b.N = t.N;
      b.n_samples = std::max<long>(1, x.cfg.n_samples / 10);
      b.delta = x.cfg.delta;
      b.epsilon = x.cfg.bound_epsilon;
      b.seed = seed.child(0);
      const double M = std::min(x.cfg.recenter_cutoff, t.N);
      rows.push_back(free_energy::bd_lower_bound(t.L, M, x.cfg.bound_epsilon, p, std::nullopt, b));
      free_energy::McOptions mo;
      mo.annealed = x.cfg.annealed;
      rows.push_back(free_energy::mc_partition(t.L, t.N, p, x.cfg.n_samples, seed.child(1), mo));
      b.seed = seed.child(2);
      rows.push_back(free_energy::bd_upper_bound(t.L, M, p, std::nullopt, b));
    });
  }
  free_energy::write_curve_csv(x.output("sandwich.csv"), rows, x.hash);
}

sampler::SamplerConfig sampler_config(const ExperimentConfig& c) {
  sampler::SamplerConfig s;
  s.kernel = c.flags.mala ? sampler::Kernel::Mala : sampler::Kernel::Imh;
  s.thin = c.thin;
  s.gff.massless_mean_zero = c.flags.massless_mean_zero;
  return s;
}

void sample(Context& x) {
  Csv csv(x.output("sample.csv"),
          "L,N,kernel,n,burn_in,acceptance,tau,mean_w2,stderr_w2,mean_w2_sq,stderr_w2_sq,tau_int,ess,warnings");
  const auto sc = sampler_config(x.cfg);
  for (const auto& t : x.grid()) {
    guarded(t.name, [&] {
      auto lat = FourierLattice::build(t.L, t.N);
      const auto p = sampler::concentration_params(*lat, x.cfg.sigma, x.A(), sc);
      auto w2 = [&p](const sampler::ChainState& s) { return sampler::wick_square_integral(s, p); };
      auto w2sq = [&p](const sampler::ChainState& s) {
        const double v = sampler::wick_square_integral(s, p);
        return v * v;
      };
      const auto h = sampler::run_chain(lat, p, sc, x.cfg.n_samples, x.seed_for(t), {w2, w2sq});
      const auto d = sampler::chain_diagnostics(h);
      const auto& a = d.observables[0];
      const auto& b = d.observables[1];
      csv.row(x.hash, t.L, t.N, sampler::to_string(sc.kernel), x.cfg.n_samples, h.burn_in, d.acceptance, h.tau,
              a.mean, a.stderr_, b.mean, b.stderr_, a.tau_int, a.ess, joined(h.warnings));
      for (const auto& w : h.warnings) x.manifest.warnings.push_back(t.name + ": " + w);
    });
  }
}

void concentrate(Context& x) {
  std::vector<sampler::ConcentrationReport> reports;
  Csv pairs(x.output("pairings.csv"), "L,N,test_function,mean_abs,stderr");
  const auto sc = sampler_config(x.cfg);
  for (const auto& t : x.grid()) {
    guarded(t.name, [&] {
      auto lat = FourierLattice::build(t.L, t.N);
      std::vector<std::pair<std::string, spectral::Field>> tests;
      for (int j = 0; j < x.cfg.test_functions; ++j) {
        const double shift = 2.0 * x.cfg.bump_radius * j;
        tests.emplace_back("bump" + std::to_string(j),
                           sampler::bump_test_function(lat, x.cfg.bump_radius, shift, shift));
      }
      const auto s = sampler::sample_concentration(t.L, t.N, x.cfg.eta, x.cfg.sigma, x.A(), tests, sc,
                                                   x.cfg.n_samples, x.seed_for(t));
      for (auto& r : sampler::tail_reports(s, x.cfg.epsilon_list)) reports.push_back(std::move(r));
      for (const auto& p : s.pairings) pairs.row(x.hash, t.L, t.N, p.id, p.mean_abs, p.stderr_);
      for (const auto& w : s.warnings) x.manifest.warnings.push_back(t.name + ": " + w);
    });
  }
  sampler::write_concentration_csv(x.output("concentration.csv"), reports, x.hash);
}

void oracle(Context& x) {
  std::vector<free_energy::FreeEnergyEstimate> rows;
  Csv mom(x.output("oracle_moments.csv"), "L,N,log_z,mean_w2,mean_w2_sq");
  for (const auto& t : x.grid()) {
    guarded(t.name, [&] {
      auto lat = FourierLattice::build(t.L, t.N);
      const auto p = InteractionParams::for_lattice(*lat, x.cfg.sigma, x.A());
      rows.push_back(free_energy::quadrature_partition(t.L, t.N, p, x.cfg.quadrature_order));
      free_energy::McOptions mo;
      mo.annealed = x.cfg.annealed;
      rows.push_back(free_energy::mc_partition(t.L, t.N, p, x.cfg.n_samples, x.seed_for(t), mo));
      const auto m = free_energy::quadrature_moments(t.L, t.N, p, x.cfg.quadrature_order);
      mom.row(x.hash, t.L, t.N, m.log_z, m.mean_w2, m.mean_w2_sq);
    });
  }
  free_energy::write_curve_csv(x.output("oracle.csv"), rows, x.hash);
}

}  // namespace

RunManifest run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.config_hash = config_hash(config);
  m.version = code_version();
  m.warnings = config.notes();
  const fs::path dir = out_dir.empty() ? fs::path(config.output_path) : out_dir;
  fs::create_directories(dir);
  Context x{config, dir, m.config_hash, m};
  const std::string& c = config.command;
  if (c == "tadpole-scan") tadpole_scan(x);
  else if (c == "gff-stats") gff_stats(x);
  else if (c == "wick-check") wick_check(x);
  else if (c == "ground-state") ground_state(x);
  else if (c == "critical-a") critical_a(x);
  else if (c == "free-energy") free_energy_cmd(x);
  else if (c == "sandwich") sandwich(x);
  else if (c == "sample") sample(x);
  else if (c == "concentrate") concentrate(x);
  else if (c == "oracle") oracle(x);
  else throw ConfigError({"constraint-violation: command '" + c + "' is not known"});
  m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(dir / "manifest.json") << manifest_json(m) << '\n';
  return m;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["config_hash"] = m.config_hash;
  j["version"] = m.version;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["seeds"] = nlohmann::json::array();
  for (const auto& s : m.seeds) j["seeds"].push_back({{"task", s.task}, {"master_seed", s.master_seed}, {"stream_id", s.stream_id}});
  j["outputs"] = m.outputs;
  j["warnings"] = m.warnings;
  return j.dump(2);
}

}  // namespace phi3::experiment

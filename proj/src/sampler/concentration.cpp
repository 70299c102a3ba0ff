#include "phi3/sampler/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "phi3/errors.hpp"
#include "phi3/spectral/ops.hpp"

namespace phi3::sampler {

using spectral::FourierLattice;

InteractionParams concentration_params(const FourierLattice& lattice, double sigma, double A,
                                       const SamplerConfig& config) {
  auto p = InteractionParams::for_lattice(lattice, sigma, A);
  if (config.gff.massless_mean_zero) p.wick_constant = spectral::tadpole_massless(lattice.L(), lattice.N());
  return p;
}

double rescaled_norm(const Field& phi, double eta, bool massless) {
  const Field psi = spectral::rescale_down(phi);
  return massless ? spectral::homogeneous_sobolev_norm(psi, -eta) : spectral::sobolev_norm(psi, -eta);
}

ConcentrationSample sample_concentration(double L, double N, double eta, double sigma, double A,
                                         const std::vector<std::pair<std::string, Field>>& tests,
                                         const SamplerConfig& config, long n, const SeedSpec& seed) {
  auto lat = FourierLattice::build(L, N);
  const auto params = concentration_params(*lat, sigma, A, config);
  const bool massless = config.gff.massless_mean_zero;
  std::vector<Observable> obs;
  obs.push_back([&](const ChainState& s) { return rescaled_norm(s.field, eta, massless); });
  for (const auto& [id, g] : tests) {
    if (!spectral::same_lattice(g, Field(lat))) throw CutoffMismatch("test function " + id + " lives on another lattice");
    obs.push_back([&g](const ChainState& s) { return std::abs(spectral::inner(s.field, g)); });
  }
  auto h = run_chain(lat, params, config, n, seed, obs);
  ConcentrationSample out;
  out.L = L;
  out.N = N;
  out.eta = eta;
  out.norms = h.series[0];
  out.norm_summary = summarize_series(out.norms);
  out.warnings = h.warnings;
  for (std::size_t j = 0; j < tests.size(); ++j) {
    const auto s = summarize_series(h.series[j + 1]);
    out.pairings.push_back({tests[j].first, s.mean, s.stderr_});
  }
  return out;
}

namespace {

ConcentrationReport tail_from(const std::vector<double>& norms, double ess, double L, double N, double eta,
                              double epsilon) {
  ConcentrationReport r;
  r.L = L;
  r.N = N;
  r.eta = eta;
  r.epsilon = epsilon;
  r.ess = ess;
  const auto n = static_cast<double>(norms.size());
  const auto hits = std::count_if(norms.begin(), norms.end(), [&](double v) { return v >= epsilon; });
  const double p = static_cast<double>(hits) / n;
  r.tail_prob = p;
  r.stderr_ = std::sqrt(p * (1.0 - p) / std::max(1.0, ess));
  if (p < 10.0 / n) {
    r.censored = true;
    r.tail_prob = 10.0 / n;
    r.stderr_ = 0.0;
    r.flags.push_back("censored-upper-bound");
  }
  if (ess < 100.0) r.flags.push_back("ess-too-low");
  return r;
}

}  // namespace

std::vector<ConcentrationReport> tail_reports(const ConcentrationSample& s, const std::vector<double>& epsilons) {
  const double ess = s.norm_summary.infinite_tau ? 1.0 : s.norm_summary.ess;
  std::vector<ConcentrationReport> out;
  for (double eps : epsilons) {
    auto r = tail_from(s.norms, ess, s.L, s.N, s.eta, eps);
    r.pairings = s.pairings;
    for (const auto& w : s.warnings) r.flags.push_back(w);
    out.push_back(std::move(r));
  }
  return out;
}

ConcentrationReport estimate_norm_tail(double L, double N, double eta, double epsilon, double sigma, double A,
                                       const SamplerConfig& config, long n, const SeedSpec& seed) {
  return tail_reports(sample_concentration(L, N, eta, sigma, A, {}, config, n, seed), {epsilon}).front();
}

ConcentrationReport pairing_statistics(double L, double N, const std::vector<std::pair<std::string, Field>>& tests,
                                       double sigma, double A, const SamplerConfig& config, long n,
                                       const SeedSpec& seed) {
  const auto s = sample_concentration(L, N, 0.0, sigma, A, tests, config, n, seed);
  ConcentrationReport r;
  r.L = L;
  r.N = N;
  r.ess = s.norm_summary.ess;
  r.pairings = s.pairings;
  r.flags = s.warnings;
  return r;
}

ConcentrationReport gff_norm_tail(double L, double N, double eta, double epsilon, long n, const SeedSpec& seed,
                                  const spectral::GffOptions& gff) {
  auto lat = FourierLattice::build(L, N);
  std::vector<double> norms(n);
  for (long i = 0; i < n; ++i) {
    norms[i] = rescaled_norm(spectral::sample_gff(lat, seed.child(static_cast<std::uint64_t>(i)), gff), eta,
                             gff.massless_mean_zero);
  }
  return tail_from(norms, static_cast<double>(n), L, N, eta, epsilon);
}

Field bump_test_function(const spectral::LatticePtr& lattice, double radius, double x0, double y0) {
  const double L = lattice->L();
  if (radius <= 0.0 || 2.0 * radius > L) throw Error("bump_test_function: support must fit inside the torus");
  auto profile = [radius](double r) {
    const double u = r / radius;
    return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
  };
  using boost::math::quadrature::gauss_kronrod;
  Field g(lattice);
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    if (i != FourierLattice::zero_index() && !lattice->is_representative(i)) continue;
    const auto& m = lattice->mode(i);
    const double k = 2.0 * std::numbers::pi * std::hypot(m.n1, m.n2) / L;
    const double hat = 2.0 * std::numbers::pi *
                       gauss_kronrod<double, 61>::integrate(
                           [&](double r) { return profile(r) * boost::math::cyl_bessel_j(0, k * r) * r; }, 0.0,
                           radius, 10, 1e-13);
    const double phase = -2.0 * std::numbers::pi * (m.n1 * x0 + m.n2 * y0) / L;
    g.set(i, std::polar(hat / L, phase));
  }
  return g;
}

SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se) {
  if (x.size() != y.size() || x.size() != se.size() || x.size() < 2) throw Error("loglog_slope: need >= 2 points");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = se[i] > 0.0 ? (se[i] / y[i]) * (se[i] / y[i]) : 1e-300;
    const double w = 1.0 / v;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sw += w, sx += w * lx, sy += w * ly, sxx += w * lx * lx, sxy += w * lx * ly;
  }
  const double det = sw * sxx - sx * sx;
  return {(sw * sxy - sx * sy) / det, std::sqrt(sw / det)};
}

void write_concentration_csv(const std::filesystem::path& path, const std::vector<ConcentrationReport>& rows,
                             const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "L,N,eta,epsilon,tail_prob,stderr,ess,flags,config_hash\n";
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out << r.L << ',' << r.N << ',' << r.eta << ',' << r.epsilon << ',' << r.tail_prob << ',' << r.stderr_ << ','
        << r.ess << ',' << flags << ',' << config_hash << '\n';
  }
}

}  // namespace phi3::sampler

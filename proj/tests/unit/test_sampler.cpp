#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "phi3/errors.hpp"
#include "phi3/free_energy/free_energy.hpp"
#include "phi3/sampler/chain.hpp"
#include "phi3/sampler/concentration.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/ops.hpp"

using namespace phi3;
using namespace phi3::sampler;
using spectral::FourierLattice;

namespace {

SeriesSummary chain_moment(Kernel k, const spectral::LatticePtr& lat, const InteractionParams& p, long n,
                           std::uint64_t seed) {
  SamplerConfig sc;
  sc.kernel = k;
  auto h = run_chain(lat, p, sc, n, SeedSpec{seed, 0}, {[&](const ChainState& s) { return wick_square_integral(s, p); }});
  return chain_diagnostics(h).observables[0];
}

}  // namespace

TEST_CASE("IMH and MALA reproduce the oracle moment on the 5-dof truncation") {
  auto lat = FourierLattice::build(1, 1);
  for (auto [sigma, A] : {std::pair{1.0, 2.0}, std::pair{-1.0, 0.5}}) {
    const auto p = InteractionParams::for_lattice(*lat, sigma, A);
    const double exact = free_energy::quadrature_moments(1, 1, p).mean_w2;
    for (auto k : {Kernel::Imh, Kernel::Mala}) {
      const auto s = chain_moment(k, lat, p, 40000, 100 + static_cast<int>(k));
      CHECK(std::abs(s.mean - exact) <= 3.0 * s.stderr_);
    }
  }
}

TEST_CASE("free Langevin chain has the Ornstein-Uhlenbeck variance") {
  auto lat = FourierLattice::build(1, 2);
  const InteractionParams p{};
  std::vector<std::size_t> modes{0};
  for (std::size_t i = 1; i < lat->size() && modes.size() < 4; ++i)
    if (lat->is_representative(i) && (modes.size() < 2 || lat->freq_sq(i) > lat->freq_sq(modes.back()))) modes.push_back(i);
  std::vector<Observable> obs;
  for (auto i : modes) obs.push_back([i](const ChainState& s) { return std::norm(s.field[i]); });
  SamplerConfig sc;
  sc.tau = 0.5;
  auto h = run_chain(lat, p, sc, 40000, SeedSpec{7, 0}, obs);
  const auto d = chain_diagnostics(h);
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double expected = 1.0 / lat->bracket_sq(modes[j]);
    CHECK(std::abs(d.observables[j].mean - expected) <= 3.0 * d.observables[j].stderr_);
  }
}

TEST_CASE("autocorrelation diagnostics") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> iid(20000), ar(200000), flat(500, 2.0);
  for (auto& x : iid) x = n(gen);
  double y = 0.0;
  for (auto& x : ar) x = y = 0.9 * y + std::sqrt(1 - 0.81) * n(gen);
  const auto a = summarize_series(iid);
  CHECK(a.tau_int == doctest::Approx(1.0).epsilon(0.1));
  CHECK(a.ess == doctest::Approx(20000).epsilon(0.1));
  const auto b = summarize_series(ar);
  CHECK(b.tau_int == doctest::Approx(19.0).epsilon(0.1));
  CHECK(summarize_series(flat).infinite_tau);
  ChainHistory h;
  h.series.push_back(std::vector<double>(50, 0.0));
  CHECK_THROWS(chain_diagnostics(h));
}

TEST_CASE("zero-mode slice step keeps the cached potential consistent") {
  auto lat = FourierLattice::build(2, 2);
  const auto p = InteractionParams::for_lattice(*lat, 1.0, 0.3);
  Rng rng(SeedSpec{8, 0});
  auto state = ChainState::at(spectral::sample_gff(lat, rng), p);
  state.step_count = 17;
  const Field before = state.field;
  for (int k = 0; k < 5; ++k) zero_mode_slice_step(state, Target{p, 1.0, {}}, rng);
  CHECK(state.step_count == 17);
  CHECK(state.potential.total == doctest::Approx(wick::interaction(state.field, p).total).epsilon(1e-12));
  for (std::size_t i = 1; i < lat->size(); ++i) CHECK(state.field[i] == before[i]);
  CHECK(state.field[0] != before[0]);
}

TEST_CASE("checkpoint round trip") {
  auto lat = FourierLattice::build(2, 2);
  const auto p = InteractionParams::for_lattice(*lat, 1.0, 1.0);
  Rng rng(SeedSpec{9, 0});
  auto state = ChainState::at(spectral::sample_gff(lat, rng), p);
  for (int k = 0; k < 10; ++k) langevin_step(state, 0.1, Target{p, 1.0, {}}, rng);
  const auto path = std::filesystem::temp_directory_path() / "phi3_checkpoint_test.bin";
  save_checkpoint(path, state);
  const auto back = load_checkpoint(path, p);
  CHECK(back.step_count == state.step_count);
  CHECK(back.accept_count == state.accept_count);
  CHECK(back.potential.total == state.potential.total);
  for (std::size_t i = 0; i < lat->size(); ++i) CHECK(back.field[i] == state.field[i]);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".counters");
}

TEST_CASE("chains are reproducible") {
  auto lat = FourierLattice::build(1, 1);
  const auto p = InteractionParams::for_lattice(*lat, 1.0, 1.0);
  const auto a = chain_moment(Kernel::Mala, lat, p, 2000, 5);
  const auto b = chain_moment(Kernel::Mala, lat, p, 2000, 5);
  CHECK(a.mean == b.mean);
}

TEST_CASE("tail probabilities") {
  SamplerConfig sc;
  auto lat = FourierLattice::build(2, 2);
  std::vector<std::pair<std::string, Field>> tests{{"bump", bump_test_function(lat, 0.4, 1.0, 1.0)}};
  const auto s = sample_concentration(2, 2, 0.5, 1.0, 0.5, tests, sc, 2000, SeedSpec{10, 0});
  const auto reps = tail_reports(s, {0.0, 0.5, 1.0, 2.0, 4.0, 1e6});
  CHECK(reps[0].tail_prob == 1.0);
  for (std::size_t i = 1; i < reps.size(); ++i) CHECK(reps[i].tail_prob <= reps[i - 1].tail_prob);
  CHECK(reps.back().censored);
  CHECK(reps.back().tail_prob == doctest::Approx(10.0 / 2000));
  REQUIRE(s.pairings.size() == 1);
  CHECK(s.pairings[0].mean_abs > 0.0);
}

TEST_CASE("reference Gaussian tail") {
  const auto r0 = gff_norm_tail(2, 2, 0.5, 0.0, 500, SeedSpec{11, 0});
  CHECK(r0.tail_prob == 1.0);
  const auto r = gff_norm_tail(2, 2, 0.5, 1e6, 500, SeedSpec{11, 0});
  CHECK(r.censored);
}

TEST_CASE("bump test function") {
  auto lat = FourierLattice::build(4, 4);
  const Field g = bump_test_function(lat, 0.5, 2.0, 2.0);
  // Value at the centre is e^0 = 1 up to the band limit; far away it vanishes.
  CHECK(g.integral() > 0.0);
  CHECK_THROWS(bump_test_function(lat, 2.5));
  const Field pairing_zero(lat);
  CHECK(spectral::inner(g, pairing_zero) == 0.0);
}

TEST_CASE("log-log slope") {
  std::vector<double> x{1, 2, 4, 8}, y, se;
  for (double v : x) {
    y.push_back(3.0 * std::pow(v, -1.5));
    se.push_back(0.01 * y.back());
  }
  const auto f = loglog_slope(x, y, se);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(f.stderr_ > 0.0);
}

TEST_CASE("rescaled norm of the zero field") {
  auto lat = FourierLattice::build(4, 1);
  CHECK(rescaled_norm(Field(lat), 0.5, false) == 0.0);
}

#include <cmath>

#include "phi3/free_energy/free_energy.hpp"
#include "phi3/spectral/lattice.hpp"

namespace phi3::free_energy {

CurveTrend decreasing_trend(const std::vector<CurveRow>& rows) {
  CurveTrend t;
  t.strictly_decreasing = rows.size() >= 2;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double a = std::abs(rows[i].per_L4);
    const double b = std::abs(rows[i + 1].per_L4);
    const double se = std::hypot(rows[i].per_L4_stderr, rows[i + 1].per_L4_stderr);
    const double z = se > 0.0 ? (a - b) / se : (a > b ? std::numeric_limits<double>::infinity() : 0.0);
    t.z_scores.push_back(z);
    if (!(z > 3.0)) t.strictly_decreasing = false;
  }
  return t;
}

FreeEnergyCurve free_energy_curve(const std::vector<double>& L_list, double N, double sigma, double A, long budget,
                                  const SeedSpec& seed, const McOptions& opts) {
  FreeEnergyCurve c;
  for (std::size_t i = 0; i < L_list.size(); ++i) {
    const double L = L_list[i];
    auto lat = spectral::FourierLattice::build(L, N);
    const auto p = InteractionParams::for_lattice(*lat, sigma, A);
    CurveRow r{mc_partition(L, N, p, budget, seed.child(i), opts), 0.0, 0.0};
    const double L4 = std::pow(L, 4);
    r.per_L4 = r.estimate.log_z / L4;
    r.per_L4_stderr = r.estimate.stderr_ / L4;
    c.rows.push_back(std::move(r));
  }
  c.trend = decreasing_trend(c.rows);
  return c;
}

}  // namespace phi3::free_energy

#include "phi3/spectral/ops.hpp"

#include <cmath>
#include <numbers>

#include "phi3/errors.hpp"
#include "phi3/spectral/grid_transform.hpp"

namespace phi3::spectral {

Field project(const Field& field, double N_prime) {
  const auto& lat = field.lattice();
  if (N_prime > lat.N() * (1.0 + 1e-12)) {
    throw CutoffExceedsLattice("project: N' exceeds the lattice cutoff");
  }
  const double limit = N_prime * N_prime * (1.0 + 1e-12) + 1e-12;
  std::vector<Complex> c(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (lat.freq_sq(i) > limit) c[i] = {};
  }
  return Field(field.lattice_ptr(), std::move(c));
}

Field transfer(const Field& field, const LatticePtr& target) {
  const auto& src = field.lattice();
  if (std::abs(src.L() - target->L()) > 1e-12 * src.L()) {
    throw CutoffMismatch("transfer: torus sizes differ");
  }
  std::vector<Complex> c(target->size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& m = target->mode(i);
    if (auto j = src.index_of(m.n1, m.n2)) c[i] = field[*j];
  }
  return Field(target, std::move(c));
}

double sobolev_norm(const Field& field, double s) {
  const auto& lat = field.lattice();
  double total = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    total += std::pow(lat.bracket_sq(i), s) * std::norm(field[i]);
  }
  return std::sqrt(total);
}

double homogeneous_sobolev_norm(const Field& field, double s) {
  const auto& lat = field.lattice();
  double total = 0.0;
  for (std::size_t i = 1; i < field.size(); ++i) {
    total += std::pow(lat.freq_sq(i), s) * std::norm(field[i]);
  }
  return std::sqrt(total);
}

double gradient_sq(const Field& field) {
  const auto& lat = field.lattice();
  double total = 0.0;
  for (std::size_t i = 1; i < field.size(); ++i) total += lat.freq_sq(i) * std::norm(field[i]);
  return 4.0 * std::numbers::pi * std::numbers::pi * total;
}

LpResult lp_norm_checked(const Field& field, double p, int G) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1");
  const auto& lat = field.lattice();
  if (G <= 0) G = lat.M();
  const auto values = field.grid(G);
  double total = 0.0;
  for (double v : values) total += std::pow(std::abs(v), p);
  total *= cell_area(lat.L(), G);
  return {std::pow(total, 1.0 / p), p * lat.K() >= G};
}

double lp_norm(const Field& field, double p) { return lp_norm_checked(field, p).value; }

double cube_integral(const Field& field) {
  const auto& lat = field.lattice();
  if (lat.K() == 0) {
    const double v = field[0].real() / lat.L();
    return v * v * v * lat.L() * lat.L();
  }
  const int G = fft_friendly_size(3 * lat.K() + 1);
  const auto values = field.grid(G);
  double total = 0.0;
  for (double v : values) total += v * v * v;
  return total * cell_area(lat.L(), G);
}

Field rescale_down(const Field& field) {
  const auto& lat = field.lattice();
  const double L = lat.L();
  auto target = FourierLattice::build(L * L, lat.N() / L, lat.M());
  if (target->size() != lat.size()) throw Error("rescale_down: mode sets differ");
  std::vector<Complex> c(field.coeffs().begin(), field.coeffs().end());
  for (auto& v : c) v /= L;
  return Field(target, std::move(c));
}

Field rescale_up(const Field& field) {
  const auto& lat = field.lattice();
  const double L = std::sqrt(lat.L());
  auto target = FourierLattice::build(L, lat.N() * L, lat.M());
  if (target->size() != lat.size()) throw Error("rescale_up: mode sets differ");
  std::vector<Complex> c(field.coeffs().begin(), field.coeffs().end());
  for (auto& v : c) v *= L;
  return Field(target, std::move(c));
}

}  // namespace phi3::spectral

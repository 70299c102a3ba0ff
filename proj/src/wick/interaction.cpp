#include "phi3/wick/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "phi3/errors.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/grid_transform.hpp"
#include "phi3/spectral/ops.hpp"

namespace phi3::wick {

using spectral::cell_area;
using spectral::Complex;
using spectral::fft_friendly_size;

InteractionParams InteractionParams::for_lattice(const FourierLattice& lattice, double sigma, double A) {
  return {sigma, A, spectral::tadpole(lattice.L(), lattice.N())};
}

namespace {

void require_grid(int G, int needed, const char* what) {
  if (G < needed) {
    throw AliasingError(std::string(what) + ": grid of " + std::to_string(G) + " points aliases, need at least " +
                        std::to_string(needed));
  }
}

void require_same_torus(const FourierLattice& a, const FourierLattice& b) {
  if (std::abs(a.L() - b.L()) > 1e-12 * a.L()) throw CutoffMismatch("fields live on tori of different size");
}

Field power_field(const Field& field, int degree, double c, int G, const LatticePtr& target) {
  auto v = field.grid(G);
  for (auto& x : v) x = degree == 2 ? x * x - c : x * (x * x - 3.0 * c);
  return Field::from_grid(target, v, G);
}

}  // namespace

Field wick_square(const Field& field, double c, int grid) {
  const auto& lat = field.lattice();
  const int G = grid > 0 ? grid : lat.M();
  require_grid(G, 4 * lat.K() + 1, "wick_square");
  auto target = FourierLattice::build(lat.L(), 2.0 * lat.N());
  return power_field(field, 2, c, G, target);
}

Field wick_cube(const Field& field, double c, int grid) {
  const auto& lat = field.lattice();
  const int G = grid > 0 ? grid : fft_friendly_size(6 * lat.K() + 1);
  require_grid(G, 6 * lat.K() + 1, "wick_cube");
  auto target = FourierLattice::build(lat.L(), 3.0 * lat.N());
  return power_field(field, 3, c, G, target);
}

PotentialValue interaction_from_moments(double int1, double int2, double int3, double area,
                                        const InteractionParams& p) {
  PotentialValue v;
  const double c = p.wick_constant;
  v.cubic = p.sigma / 3.0 * (int3 - 3.0 * c * int1);
  const double w2 = int2 - c * area;
  v.quartic = p.A * w2 * w2;
  v.total = v.cubic + v.quartic;
  return v;
}

PotentialValue interaction(const Field& field, const InteractionParams& p) {
  const auto& lat = field.lattice();
  const double int3 = p.sigma != 0.0 ? spectral::cube_integral(field) : 0.0;
  return interaction_from_moments(field.integral(), spectral::l2_sq(field), int3, lat.L() * lat.L(), p);
}

PotentialWithGradient interaction_gradient(const Field& field, const InteractionParams& p) {
  const auto& lat = field.lattice();
  const double area = lat.L() * lat.L();
  const double int2 = spectral::l2_sq(field);
  const double c = p.wick_constant;
  const double S = int2 - c * area;

  // On a grid of 3K + 1 points both int phi^3 and P_N(phi^2) are exact.
  const int G = fft_friendly_size(3 * lat.K() + 1);
  auto v = field.grid(G);
  double int3 = 0.0;
  for (auto& x : v) {
    int3 += x * x * x;
    x = x * x;
  }
  int3 *= cell_area(lat.L(), G);
  Field grad = Field::from_grid(field.lattice_ptr(), v, G);
  // grad = sigma (phi^2 - c) + 4 A S phi
  grad *= p.sigma;
  std::vector<Complex> coeffs(grad.coeffs().begin(), grad.coeffs().end());
  coeffs[0] -= p.sigma * c * lat.L();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += 4.0 * p.A * S * field[i];
  return {interaction_from_moments(field.integral(), int2, int3, area, p), Field(field.lattice_ptr(), std::move(coeffs))};
}

WickData WickData::from_sample(const Field& phi, double c) {
  return {phi, wick_square(phi, c), wick_cube(phi, c)};
}

double cross_integral(const Field& f, const Field& g) {
  require_same_torus(f.lattice(), g.lattice());
  const Field& small = f.size() <= g.size() ? f : g;
  const Field& big = f.size() <= g.size() ? g : f;
  double s = 0.0;
  for (std::size_t i = 0; i < small.size(); ++i) {
    const auto& m = small.lattice().mode(i);
    if (auto j = big.lattice().index_of(m.n1, m.n2)) {
      s += small[i].real() * big[*j].real() + small[i].imag() * big[*j].imag();
    }
  }
  return s;
}

double triple_integral(const Field& f, const Field& g, const Field& h) {
  require_same_torus(f.lattice(), g.lattice());
  require_same_torus(f.lattice(), h.lattice());
  const int K = f.lattice().K() + g.lattice().K() + h.lattice().K();
  const int G = fft_friendly_size(std::max(K + 1, 1));
  const auto a = f.grid(G);
  const auto b = g.grid(G);
  const auto c = h.grid(G);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i] * c[i];
  return s * cell_area(f.lattice().L(), G);
}

std::pair<double, double> drift_decomposition(const WickData& xi, const Field& theta, const InteractionParams& p) {
  if (!spectral::same_lattice(xi.one, theta)) {
    throw CutoffMismatch("drift_decomposition: <1> and theta must share a lattice");
  }
  require_same_torus(xi.one.lattice(), xi.two.lattice());
  require_same_torus(xi.one.lattice(), xi.three.lattice());

  const double s = p.sigma;
  const double t2 = spectral::l2_sq(theta);
  const double one_theta = spectral::inner(xi.one, theta);
  const double two_theta = cross_integral(xi.two, theta);

  double phi1 = s / 3.0 * xi.three.integral();
  if (s != 0.0) {
    phi1 += s * two_theta + s * triple_integral(xi.one, theta, theta) + s / 3.0 * spectral::cube_integral(theta);
  }
  const double w = xi.two.integral() + 2.0 * one_theta + t2;
  const double phi2 = p.A * w * w - p.A * t2 * t2;
  return {phi1, phi2};
}

}  // namespace phi3::wick

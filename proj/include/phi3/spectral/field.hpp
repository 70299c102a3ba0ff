#pragma once

#include <complex>
#include <span>
#include <vector>

#include "phi3/spectral/lattice.hpp"

namespace phi3::spectral {

using Complex = std::complex<double>;

/// Real field on the torus of side L stored as Fourier coefficients on the
/// full symmetric mode set, phi(x) = sum_lambda c(lambda) e_lambda(x) with
/// e_lambda(x) = exp(2 pi i lambda.x) / L. Coefficients satisfy
/// c(-lambda) = conj(c(lambda)); the zero mode is real.
class Field {
 public:
  explicit Field(LatticePtr lattice);

  /// Validates the Hermitian constraint (relative tolerance 1e-12) and then
  /// symmetrizes exactly.
  Field(LatticePtr lattice, std::vector<Complex> coeffs);

  static Field constant(LatticePtr lattice, double value);

  /// Analysis of real grid samples phi(j L / G). Exact when the sampled
  /// function is band-limited to |n_i| < G / 2.
  static Field from_grid(LatticePtr lattice, std::span<const double> values, int grid);

  const FourierLattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Sets mode i and its conjugate partner together.
  void set(std::size_t i, Complex value);

  /// Real-space samples on a G x G grid, row-major in (j1, j2). Synthesis is
  /// exact for any G (colliding frequencies fold onto the same grid values).
  std::vector<double> grid(int G) const;
  std::vector<double> grid() const { return grid(lattice_->M()); }

  /// Mean value over the torus times area: integral of phi = L c(0).
  double integral() const;

  bool is_zero() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  /// this += s * other
  Field& axpy(double s, const Field& other);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  void require_same_lattice(const Field& other) const;

  LatticePtr lattice_;
  std::vector<Complex> coeffs_;
};

/// L^2(T^2_L) inner product, sum over all modes of conj(a) b (real by symmetry).
double inner(const Field& a, const Field& b);

/// Integral of phi^2, by Parseval.
double l2_sq(const Field& f);

/// Same lattice object or identical (L, N, M).
bool same_lattice(const Field& a, const Field& b);

}  // namespace phi3::spectral

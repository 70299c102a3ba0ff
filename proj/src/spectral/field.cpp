#include "phi3/spectral/field.hpp"

#include <algorithm>
#include <cmath>

#include "phi3/errors.hpp"
#include "phi3/spectral/grid_transform.hpp"

namespace phi3::spectral {

Field::Field(LatticePtr lattice) : lattice_(std::move(lattice)) {
  if (!lattice_) throw Error("field: null lattice");
  coeffs_.assign(lattice_->size(), Complex{});
}

Field::Field(LatticePtr lattice, std::vector<Complex> coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
  if (!lattice_) throw Error("field: null lattice");
  if (coeffs_.size() != lattice_->size()) throw Error("field: coefficient count does not match lattice");
  double scale_sq = 0.0;
  for (const auto& c : coeffs_) scale_sq = std::max(scale_sq, std::norm(c));
  const double tol_sq = 1e-24 * std::max(scale_sq, 1e-300);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const std::size_t j = lattice_->conjugate(i);
    if (std::norm(coeffs_[j] - std::conj(coeffs_[i])) > tol_sq) {
      throw Error("field: coefficients violate Hermitian symmetry");
    }
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const std::size_t j = lattice_->conjugate(i);
    if (i == j) {
      coeffs_[i] = {coeffs_[i].real(), 0.0};
    } else if (lattice_->is_representative(i)) {
      coeffs_[j] = std::conj(coeffs_[i]);
    }
  }
}

Field Field::constant(LatticePtr lattice, double value) {
  Field f(std::move(lattice));
  f.coeffs_[FourierLattice::zero_index()] = {value * f.lattice_->L(), 0.0};
  return f;
}

Field Field::from_grid(LatticePtr lattice, std::span<const double> values, int grid) {
  if (values.size() != static_cast<std::size_t>(grid) * grid) throw Error("from_grid: size mismatch");
  Field f(std::move(lattice));
  analyze(*f.lattice_, values, grid, f.coeffs_);
  // the analysis of real data is Hermitian up to rounding; make it exact
  for (std::size_t i = 0; i < f.coeffs_.size(); ++i) {
    const std::size_t j = f.lattice_->conjugate(i);
    if (i == j) {
      f.coeffs_[i] = {f.coeffs_[i].real(), 0.0};
    } else if (f.lattice_->is_representative(i)) {
      f.coeffs_[j] = std::conj(f.coeffs_[i]);
    }
  }
  return f;
}

void Field::set(std::size_t i, Complex value) {
  const std::size_t j = lattice_->conjugate(i);
  if (i == j) {
    coeffs_[i] = {value.real(), 0.0};
  } else {
    coeffs_[i] = value;
    coeffs_[j] = std::conj(value);
  }
}

std::vector<double> Field::grid(int G) const {
  std::vector<double> out(static_cast<std::size_t>(G) * G);
  synthesize(*lattice_, coeffs_, G, out);
  return out;
}

double Field::integral() const { return lattice_->L() * coeffs_[FourierLattice::zero_index()].real(); }

bool Field::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == Complex{}; });
}

void Field::require_same_lattice(const Field& other) const {
  if (!same_lattice(*this, other)) throw CutoffMismatch("field arithmetic on different lattices");
}

Field& Field::operator+=(const Field& other) {
  require_same_lattice(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_lattice(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_lattice(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  return *this;
}

double inner(const Field& a, const Field& b) {
  if (!same_lattice(a, b)) throw CutoffMismatch("inner product on different lattices");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return s;
}

double l2_sq(const Field& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return s;
}

bool same_lattice(const Field& a, const Field& b) { return a.lattice().same_as(b.lattice()); }

}  // namespace phi3::spectral

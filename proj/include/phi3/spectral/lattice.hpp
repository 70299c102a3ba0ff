#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace phi3::spectral {

/// Integer frequency n; the physical frequency on the torus of side L is n / L.
struct Mode {
  int n1 = 0;
  int n2 = 0;

  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Frequency lattice Z^2_L truncated to |lambda| <= N, together with the size
/// M of the real-space grid (M x M points) used for pointwise products.
///
/// Modes are ordered by |n|^2, then n1, then n2. The set is closed under
/// negation and contains #{n in Z^2 : |n| <= L N} modes.
class FourierLattice {
 public:
  /// Throws GridTooCoarse unless M >= 4 ceil(L N) + 2.
  static std::shared_ptr<const FourierLattice> build(double L, double N, int M);

  /// Same as build() with the smallest FFT-friendly grid satisfying the rule.
  static std::shared_ptr<const FourierLattice> build(double L, double N);

  double L() const noexcept { return L_; }
  double N() const noexcept { return N_; }
  int M() const noexcept { return M_; }

  /// Largest |n_i| that occurs, floor(L N).
  int K() const noexcept { return K_; }

  std::size_t size() const noexcept { return modes_.size(); }
  std::span<const Mode> modes() const noexcept { return modes_; }
  const Mode& mode(std::size_t i) const { return modes_[i]; }

  std::optional<std::size_t> index_of(int n1, int n2) const;
  std::size_t conjugate(std::size_t i) const { return conj_[i]; }

  /// Index of the zero mode (always 0 given the ordering).
  static constexpr std::size_t zero_index() noexcept { return 0; }

  /// |lambda|^2 = |n|^2 / L^2.
  double freq_sq(std::size_t i) const noexcept { return freq_sq_[i]; }

  /// <lambda>^2 = 1 + |lambda|^2.
  double bracket_sq(std::size_t i) const noexcept { return 1.0 + freq_sq_[i]; }

  /// True when mode i is the representative of its Hermitian pair
  /// (n1 > 0, or n1 == 0 and n2 > 0). The zero mode is not a representative.
  bool is_representative(std::size_t i) const noexcept;

  /// Number of real degrees of freedom: 1 for the zero mode plus 2 per pair.
  std::size_t real_dofs() const noexcept { return modes_.size(); }

  bool same_as(const FourierLattice& other) const noexcept;

 private:
  FourierLattice(double L, double N, int M);

  double L_;
  double N_;
  int M_;
  int K_;
  std::vector<Mode> modes_;
  std::vector<double> freq_sq_;
  std::vector<std::size_t> conj_;
  std::vector<long> lookup_;  // (2K+1)^2 table, -1 when absent
};

using LatticePtr = std::shared_ptr<const FourierLattice>;

/// Largest |n| component for the cutoff, floor(L N) with a small tolerance so
/// that integer-valued products are not lost to rounding.
int max_index(double L, double N);

/// Minimum admissible grid size 4 ceil(L N) + 2.
int min_grid_size(double L, double N);

/// Smallest integer >= n whose prime factors are all in {2, 3, 5}.
int fft_friendly_size(int n);

}  // namespace phi3::spectral

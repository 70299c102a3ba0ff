#include "phi3/spectral/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phi3/errors.hpp"

namespace phi3::spectral {

namespace {

constexpr double kIndexSlack = 1e-9;

double radius_sq_limit(double L, double N) {
  const double r = L * N;
  return r * r * (1.0 + 1e-12) + kIndexSlack;
}

}  // namespace

int max_index(double L, double N) {
  return static_cast<int>(std::floor(L * N + kIndexSlack));
}

int min_grid_size(double L, double N) {
  const int c = static_cast<int>(std::ceil(L * N - kIndexSlack));
  return 4 * std::max(c, 0) + 2;
}

int fft_friendly_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

FourierLattice::FourierLattice(double L, double N, int M)
    : L_(L), N_(N), M_(M), K_(max_index(L, N)) {
  const double limit = radius_sq_limit(L, N);
  for (int n1 = -K_; n1 <= K_; ++n1) {
    for (int n2 = -K_; n2 <= K_; ++n2) {
      if (static_cast<double>(n1 * n1 + n2 * n2) <= limit) modes_.push_back({n1, n2});
    }
  }
  std::sort(modes_.begin(), modes_.end(), [](const Mode& a, const Mode& b) {
    const int ra = a.n1 * a.n1 + a.n2 * a.n2;
    const int rb = b.n1 * b.n1 + b.n2 * b.n2;
    if (ra != rb) return ra < rb;
    if (a.n1 != b.n1) return a.n1 < b.n1;
    return a.n2 < b.n2;
  });

  const int width = 2 * K_ + 1;
  lookup_.assign(static_cast<std::size_t>(width) * width, -1);
  freq_sq_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    lookup_[static_cast<std::size_t>(m.n1 + K_) * width + (m.n2 + K_)] = static_cast<long>(i);
    freq_sq_[i] = static_cast<double>(m.n1 * m.n1 + m.n2 * m.n2) / (L * L);
  }
  conj_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    conj_[i] = *index_of(-modes_[i].n1, -modes_[i].n2);
  }
}

std::shared_ptr<const FourierLattice> FourierLattice::build(double L, double N, int M) {
  if (!(L > 0.0) || !std::isfinite(L)) throw Error("lattice: L must be positive");
  if (!(N >= 0.0) || !std::isfinite(N)) throw Error("lattice: N must be nonnegative");
  const int required = min_grid_size(L, N);
  if (M < required) {
    std::ostringstream os;
    os << "grid too coarse: M = " << M << " but L = " << L << ", N = " << N
       << " requires M >= " << required;
    throw GridTooCoarse(os.str());
  }
  return std::shared_ptr<const FourierLattice>(new FourierLattice(L, N, M));
}

std::shared_ptr<const FourierLattice> FourierLattice::build(double L, double N) {
  return build(L, N, fft_friendly_size(min_grid_size(L, N)));
}

std::optional<std::size_t> FourierLattice::index_of(int n1, int n2) const {
  if (std::abs(n1) > K_ || std::abs(n2) > K_) return std::nullopt;
  const int width = 2 * K_ + 1;
  const long v = lookup_[static_cast<std::size_t>(n1 + K_) * width + (n2 + K_)];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

bool FourierLattice::is_representative(std::size_t i) const noexcept {
  const auto& m = modes_[i];
  return m.n1 > 0 || (m.n1 == 0 && m.n2 > 0);
}

bool FourierLattice::same_as(const FourierLattice& other) const noexcept {
  return this == &other ||
         (L_ == other.L_ && N_ == other.N_ && M_ == other.M_ && modes_.size() == other.modes_.size());
}

}  // namespace phi3::spectral

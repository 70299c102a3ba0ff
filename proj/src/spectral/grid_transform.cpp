#include "phi3/spectral/grid_transform.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "phi3/errors.hpp"

namespace phi3::spectral {

namespace {

//------------------------------------------------------------------------------
// Plan cache. FFTW's planner is not thread-safe, so plans are built under a
// lock; fftw_execute_dft_* on distinct, equally aligned buffers is.
//------------------------------------------------------------------------------
struct Plans {
  fftw_plan c2r = nullptr;
  fftw_plan r2c = nullptr;
  ~Plans() {
    if (c2r) fftw_destroy_plan(c2r);
    if (r2c) fftw_destroy_plan(r2c);
  }
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw Error("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

const Plans& plans_for(int G) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(G);
  if (it != cache.end()) return *it->second;

  const std::size_t half = static_cast<std::size_t>(G) * (G / 2 + 1);
  FftwBuffer spec(sizeof(fftw_complex) * half);
  FftwBuffer real(sizeof(double) * static_cast<std::size_t>(G) * G);
  auto p = std::make_unique<Plans>();
  p->c2r = fftw_plan_dft_c2r_2d(G, G, static_cast<fftw_complex*>(spec.ptr),
                                static_cast<double*>(real.ptr), FFTW_ESTIMATE);
  p->r2c = fftw_plan_dft_r2c_2d(G, G, static_cast<double*>(real.ptr),
                                static_cast<fftw_complex*>(spec.ptr), FFTW_ESTIMATE);
  if (!p->c2r || !p->r2c) throw Error("FFTW plan creation failed");
  return *cache.emplace(G, std::move(p)).first->second;
}

int wrap(int n, int G) {
  const int r = n % G;
  return r < 0 ? r + G : r;
}

}  // namespace

void synthesize(const FourierLattice& lattice, std::span<const std::complex<double>> coeffs,
                int G, std::span<double> out) {
  if (G < 1) throw Error("synthesize: grid size must be positive");
  const int hc = G / 2 + 1;
  const std::size_t half = static_cast<std::size_t>(G) * hc;
  FftwBuffer spec(sizeof(fftw_complex) * half);
  FftwBuffer real(sizeof(double) * static_cast<std::size_t>(G) * G);
  auto* X = static_cast<fftw_complex*>(spec.ptr);
  std::memset(X, 0, sizeof(fftw_complex) * half);

  const double inv_L = 1.0 / lattice.L();
  const auto modes = lattice.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int k2 = wrap(modes[i].n2, G);
    if (k2 >= hc) continue;  // represented through its conjugate partner
    const int k1 = wrap(modes[i].n1, G);
    auto& bin = X[static_cast<std::size_t>(k1) * hc + k2];
    bin[0] += coeffs[i].real() * inv_L;
    bin[1] += coeffs[i].imag() * inv_L;
  }
  const Plans& p = plans_for(G);
  auto* x = static_cast<double*>(real.ptr);
  fftw_execute_dft_c2r(p.c2r, X, x);
  std::memcpy(out.data(), x, sizeof(double) * static_cast<std::size_t>(G) * G);
}

void analyze(const FourierLattice& lattice, std::span<const double> values, int G,
             std::span<std::complex<double>> out) {
  if (G < 1) throw Error("analyze: grid size must be positive");
  const int hc = G / 2 + 1;
  const std::size_t half = static_cast<std::size_t>(G) * hc;
  FftwBuffer spec(sizeof(fftw_complex) * half);
  FftwBuffer real(sizeof(double) * static_cast<std::size_t>(G) * G);
  auto* x = static_cast<double*>(real.ptr);
  std::memcpy(x, values.data(), sizeof(double) * static_cast<std::size_t>(G) * G);
  auto* Y = static_cast<fftw_complex*>(spec.ptr);
  const Plans& p = plans_for(G);
  fftw_execute_dft_r2c(p.r2c, x, Y);

  const double scale = lattice.L() / (static_cast<double>(G) * G);
  const auto modes = lattice.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    int k1 = wrap(modes[i].n1, G);
    int k2 = wrap(modes[i].n2, G);
    if (k2 < hc) {
      const auto& y = Y[static_cast<std::size_t>(k1) * hc + k2];
      out[i] = {y[0] * scale, y[1] * scale};
    } else {
      k1 = wrap(-modes[i].n1, G);
      k2 = wrap(-modes[i].n2, G);
      const auto& y = Y[static_cast<std::size_t>(k1) * hc + k2];
      out[i] = {y[0] * scale, -y[1] * scale};
    }
  }
}

}  // namespace phi3::spectral

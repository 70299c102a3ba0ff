#include <algorithm>
#include <cmath>
#include <numbers>

#include "phi3/errors.hpp"
#include "phi3/free_energy/free_energy.hpp"
#include "phi3/spectral/lattice.hpp"

namespace phi3::free_energy {

using spectral::FourierLattice;

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  const int n = order;
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / dp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

// Under mu the zero mode is u * s0 with u ~ N(0,1), and a Hermitian pair is
// rho e^{i theta} s / sqrt(2) with rho Rayleigh and theta uniform. A shift of
// the torus rotates the phase of mode n by e^{2 pi i n.a / L}, so with at most
// two pairs of independent wavevectors V does not depend on the phases and
// the integral reduces to the zero mode and the pair radii.
struct Evaluator {
  std::shared_ptr<const FourierLattice> lat;
  struct Coord {
    std::size_t mode;
    bool radial;
    double scale;
  };
  std::vector<Coord> coords;
  struct Triple {
    std::size_t a, b, c;
    double count;
  };
  std::vector<Triple> triples;
  std::vector<double> lo, hi;
  static constexpr int panels = 4;

  Evaluator(double L, double N) : lat(FourierLattice::build(L, N)) {
    if (lat->real_dofs() > 6) throw TooManyDofs("quadrature_partition: more than 6 real degrees of freedom");
    std::vector<std::pair<long, long>> waves;
    for (std::size_t i = 0; i < lat->size(); ++i) {
      const double s = 1.0 / std::sqrt(lat->bracket_sq(i));
      if (i == FourierLattice::zero_index()) {
        coords.push_back({i, false, s});
      } else if (lat->is_representative(i)) {
        coords.push_back({i, true, s / std::numbers::sqrt2});
        waves.emplace_back(lat->mode(i).n1, lat->mode(i).n2);
      }
    }
    if (waves.size() == 2 && waves[0].first * waves[1].second == waves[0].second * waves[1].first) {
      throw Error("quadrature_partition: pair wavevectors are parallel; phases cannot be integrated out");
    }
    for (std::size_t a = 0; a < lat->size(); ++a)
      for (std::size_t b = a; b < lat->size(); ++b) {
        const auto& ma = lat->mode(a);
        const auto& mb = lat->mode(b);
        auto c = lat->index_of(-ma.n1 - mb.n1, -ma.n2 - mb.n2);
        if (!c || *c < b) continue;
        const double count = (a == b && b == *c) ? 1.0 : (a == b || b == *c) ? 3.0 : 6.0;
        triples.push_back({a, b, *c, count});
      }
    re.assign(lat->size(), 0.0);
    im.assign(lat->size(), 0.0);
  }

  mutable std::vector<double> re, im;

  // log of the mu-density of the coordinates minus V; also int :phi^2:
  double log_integrand(const double* x, const InteractionParams& p, double& w2) const {
    double logd = 0.0;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      const auto& k = coords[j];
      const double v = x[j] * k.scale;
      if (k.radial) {
        if (x[j] <= 0.0) {
          w2 = 0.0;
          return -std::numeric_limits<double>::infinity();
        }
        logd += std::log(x[j]) - 0.5 * x[j] * x[j];
        re[k.mode] = re[lat->conjugate(k.mode)] = v;
      } else {
        logd += -0.5 * x[j] * x[j] - 0.5 * std::log(2.0 * std::numbers::pi);
        re[k.mode] = v;
      }
    }
    const double L = lat->L();
    double s2 = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) s2 += re[i] * re[i] + im[i] * im[i];
    double s3 = 0.0;
    for (const auto& t : triples) {
      const double xr = re[t.a] * re[t.b] - im[t.a] * im[t.b];
      const double xi = re[t.a] * im[t.b] + im[t.a] * re[t.b];
      s3 += t.count * (xr * re[t.c] - xi * im[t.c]);
    }
    s3 /= L;
    w2 = s2 - p.wick_constant * L * L;
    const double V = p.sigma / 3.0 * (s3 - 3.0 * p.wick_constant * L * re[0]) + p.A * w2 * w2;
    return logd - V;
  }

  // Bounding box of {log integrand > max - cut} from a grid scan, widened
  // until it no longer touches the outer box, then rescanned inside itself.
  void fit_windows(const InteractionParams& p) {
    const std::size_t d = coords.size();
    constexpr int grid = 41;
    constexpr double cut = 50.0;
    auto scan = [&](std::vector<double>& a, std::vector<double>& b, std::vector<bool>& touched) {
      std::vector<int> idx(d, 0);
      std::vector<double> x(d);
      std::vector<double> logs;
      std::vector<std::vector<int>> where;
      double best = -std::numeric_limits<double>::infinity();
      for (;;) {
        for (std::size_t j = 0; j < d; ++j) x[j] = a[j] + (b[j] - a[j]) * idx[j] / (grid - 1);
        double w2;
        const double f = log_integrand(x.data(), p, w2);
        best = std::max(best, f);
        logs.push_back(f);
        where.push_back(idx);
        std::size_t j = 0;
        while (j < d && ++idx[j] == grid) idx[j++] = 0;
        if (j == d) break;
      }
      std::vector<int> imin(d, grid), imax(d, -1);
      for (std::size_t k = 0; k < logs.size(); ++k) {
        if (logs[k] < best - cut) continue;
        for (std::size_t j = 0; j < d; ++j) {
          imin[j] = std::min(imin[j], where[k][j]);
          imax[j] = std::max(imax[j], where[k][j]);
        }
      }
      touched.assign(d, false);
      for (std::size_t j = 0; j < d; ++j) {
        const double h = (b[j] - a[j]) / (grid - 1);
        touched[j] = imax[j] == grid - 1 || (!coords[j].radial && imin[j] == 0);
        const double na = a[j] + (imin[j] - 1) * h, nb = a[j] + (imax[j] + 1) * h;
        a[j] = coords[j].radial ? std::max(0.0, na) : na;
        b[j] = nb;
      }
    };
    for (double box = 12.0;; box *= 2.0) {
      if (box > 1e4) throw Error("quadrature_partition: integrand mass not localized");
      std::vector<double> a(d), b(d, box);
      for (std::size_t j = 0; j < d; ++j) a[j] = coords[j].radial ? 0.0 : -box;
      std::vector<bool> touched;
      scan(a, b, touched);
      if (std::find(touched.begin(), touched.end(), true) != touched.end()) continue;
      scan(a, b, touched);
      lo = a;
      hi = b;
      return;
    }
  }

  // Streaming sums of exp(log integrand) x {1, w2, w2^2} in a common log scale.
  struct Sums {
    double log_scale = -std::numeric_limits<double>::infinity();
    long double s0 = 0, s1 = 0, s2 = 0;
    double log_z() const { return log_scale + static_cast<double>(std::log(s0)); }
  };

  // Composite rule: each window is cut into `panels` equal pieces carrying
  // `order` Legendre nodes apiece.
  Sums integrate(const InteractionParams& p, int order) const {
    std::vector<double> t, w;
    gauss_legendre(order, t, w);
    const std::size_t d = coords.size();
    const int n = order * panels;
    std::vector<std::vector<double>> node(d, std::vector<double>(n)), lw(d, std::vector<double>(n));
    for (std::size_t j = 0; j < d; ++j) {
      const double half = 0.5 * (hi[j] - lo[j]) / panels;
      for (int q = 0; q < panels; ++q) {
        const double mid = lo[j] + (2 * q + 1) * half;
        for (int k = 0; k < order; ++k) {
          node[j][q * order + k] = mid + half * t[k];
          lw[j][q * order + k] = std::log(w[k] * half);
        }
      }
    }
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    Sums s;
    for (;;) {
      double logw = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = node[j][idx[j]];
        logw += lw[j][idx[j]];
      }
      double w2;
      const double f = logw + log_integrand(x.data(), p, w2);
      if (f > s.log_scale) {
        const long double r = std::isfinite(s.log_scale) ? std::exp(static_cast<long double>(s.log_scale - f)) : 0.0L;
        s.s0 *= r, s.s1 *= r, s.s2 *= r;
        s.log_scale = f;
      }
      const long double e = std::exp(f - s.log_scale);
      s.s0 += e;
      s.s1 += e * w2;
      s.s2 += e * w2 * w2;
      std::size_t j = 0;
      while (j < d && ++idx[j] == n) idx[j++] = 0;
      if (j == d) break;
    }
    return s;
  }
};

void check_integrable(const InteractionParams& p) {
  if (p.A == 0.0 && p.sigma != 0.0) {
    throw DivergentIntegral("E[exp(-V)] is infinite: cubic term without quartic taming (A = 0)");
  }
}

}  // namespace

FreeEnergyEstimate quadrature_partition(double L, double N, const InteractionParams& params, int order) {
  if (order < 20) throw Error("quadrature_partition: order must be >= 20");
  check_integrable(params);
  Evaluator ev(L, N);
  ev.fit_windows(params);
  const auto a = ev.integrate(params, order);
  const auto b = ev.integrate(params, order + 10);
  FreeEnergyEstimate e;
  e.method = Method::Quadrature;
  e.L = L;
  e.N = N;
  e.sigma = params.sigma;
  e.A = params.A;
  e.log_z = a.log_z();
  const double refined = b.log_z();
  e.correction = refined - e.log_z;  // refinement change, order -> order + 10
  if (std::abs(e.correction) > 1e-6) e.flags.push_back("refinement-unstable");
  e.stderr_ = 0.0;
  return e;
}

OracleMoments quadrature_moments(double L, double N, const InteractionParams& params, int order) {
  check_integrable(params);
  Evaluator ev(L, N);
  ev.fit_windows(params);
  const auto s = ev.integrate(params, order);
  return {s.log_z(), static_cast<double>(s.s1 / s.s0),
          static_cast<double>(s.s2 / s.s0)};
}

}  // namespace phi3::free_energy

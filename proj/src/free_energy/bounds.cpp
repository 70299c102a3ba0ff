#include <cmath>

#include "phi3/errors.hpp"
#include "phi3/free_energy/free_energy.hpp"
#include "phi3/parallel.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/grid_transform.hpp"
#include "phi3/spectral/ops.hpp"
#include "phi3/wick/hermite.hpp"

namespace phi3::free_energy {

using spectral::Complex;
using spectral::FourierLattice;
using spectral::LatticePtr;

namespace {

FreeEnergyEstimate blank(double L, double N, const InteractionParams& p, Method m) {
  FreeEnergyEstimate e;
  e.method = m;
  e.L = L;
  e.N = N;
  e.sigma = p.sigma;
  e.A = p.A;
  return e;
}

// sum <lambda>^2 |f_hat|^2
double h1_sq(const Field& f) {
  const auto& lat = f.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += lat.bracket_sq(i) * std::norm(f[i]);
  return s;
}

// sum |lambda|^2 |f_hat|^2 (gradient in the convention of the measure)
double grad_sq(const Field& f) {
  const auto& lat = f.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += lat.freq_sq(i) * std::norm(f[i]);
  return s;
}

Field scaled_by_bracket(const Field& g, double factor, double power) {
  const auto& lat = g.lattice();
  std::vector<Complex> c(g.coeffs().begin(), g.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= factor * std::pow(lat.bracket_sq(i), power);
  return Field(g.lattice_ptr(), std::move(c));
}

// W_L = L^2 W(L .) carried onto the active lattice.
Field lifted_drift(const std::optional<Field>& W, const LatticePtr& lat, std::vector<std::string>& flags) {
  if (!W) return Field(lat);
  if (std::abs(W->lattice().L() - lat->L() * lat->L()) > 1e-9 * lat->L() * lat->L()) {
    throw CutoffMismatch("drift target W must live on the torus of side L^2");
  }
  const Field up = spectral::rescale_up(*W);
  Field moved = spectral::transfer(up, lat);
  if (std::abs(spectral::l2_sq(moved) - spectral::l2_sq(up)) > 1e-12 * (1.0 + spectral::l2_sq(up))) {
    flags.push_back("drift-truncated");
  }
  return moved;
}

void require_cutoff(double M, double N) {
  if (M > N * (1.0 + 1e-12)) throw CutoffExceedsLattice("recentering cutoff M exceeds N");
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, n > 1 ? std::sqrt(s / (n - 1) / n) : 0.0};
}

// max_{W'} -V(X + W') - (1 - delta)/2 ||W'||_{H^1}^2 from one start, by
// preconditioned ascent with Armijo backtracking.
double inner_sup(const Field& X, Field Wp, const InteractionParams& p, double delta, int iterations) {
  const double k = 1.0 - delta;
  auto value_grad = [&](const Field& w, Field* grad) {
    if (grad) {
      auto vg = wick::interaction_gradient(X + w, p);
      // ascent direction of F, preconditioned by (k <lambda>^2)^-1
      Field g = vg.gradient;
      g.axpy(1.0, scaled_by_bracket(w, k, 1.0));
      *grad = scaled_by_bracket(g, -1.0 / k, -1.0);
      return -vg.value.total - 0.5 * k * h1_sq(w);
    }
    return -wick::interaction(X + w, p).total - 0.5 * k * h1_sq(w);
  };
  Field d(Wp.lattice_ptr());
  double f = value_grad(Wp, &d);
  double step = 1.0;
  for (int it = 0; it < iterations; ++it) {
    // slope of F along d in the plain L^2 pairing
    const double slope = spectral::inner(scaled_by_bracket(d, k, 1.0), d);
    if (slope <= 1e-14 * (1.0 + std::abs(f))) break;
    bool moved = false;
    step = std::min(1.0, 2.0 * step);
    for (int bt = 0; bt < 50; ++bt, step *= 0.5) {
      Field trial = Wp;
      trial.axpy(step, d);
      const double ft = value_grad(trial, nullptr);
      if (ft >= f + 1e-4 * step * slope) {
        Wp = std::move(trial);
        f = value_grad(Wp, &d);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return f;
}

}  // namespace

double counterterm(double L, double M, double epsilon) { return (1.0 - epsilon) * spectral::tadpole(L, M); }

FreeEnergyEstimate bd_upper_bound(double L, double M, const InteractionParams& params, const std::optional<Field>& W,
                                  const BoundOptions& opts) {
  if (params.A == 0.0 && params.sigma != 0.0) {
    throw DivergentIntegral("bd_upper_bound: the inner supremum is unbounded without quartic taming");
  }
  if (!(opts.delta > 0.0 && opts.delta < 1.0)) throw Error("bd_upper_bound: delta must lie in (0, 1)");
  require_cutoff(M, opts.N);
  auto lat = FourierLattice::build(L, opts.N);
  auto est = blank(L, opts.N, params, Method::BdUpper);
  const Field WL = lifted_drift(W, lat, est.flags);
  const double d = opts.delta;

  std::vector<double> values(static_cast<std::size_t>(opts.n_samples));
  parallel_for(values.size(), [&](std::size_t i) {
    const Field phi = spectral::sample_gff(lat, opts.seed.child(i));
    const Field Z = spectral::project(phi, M);
    const Field X = phi - Z;
    double best = -std::numeric_limits<double>::infinity();
    for (const Field* start : {&WL, &Z}) best = std::max(best, inner_sup(X, *start, params, d, opts.inner_iterations));
    best = std::max(best, inner_sup(X, Field(lat), params, d, opts.inner_iterations));
    values[i] = best + (0.5 / d - 0.5) * h1_sq(Z);
  });
  const auto ms = mean_se(values);
  est.log_z = ms.mean;
  est.stderr_ = ms.se;
  est.n_samples = opts.n_samples;
  // -L^4 H^delta_{L^2}(W), evaluated on W_L through the scaling identity
  const double w2 = spectral::l2_sq(WL);
  est.deterministic = -(0.5 * (1.0 - d) * grad_sq(WL) + params.sigma / 3.0 * spectral::cube_integral(WL) + params.A * w2 * w2);
  est.correction = est.log_z - est.deterministic;
  return est;
}

FreeEnergyEstimate bd_lower_bound(double L, double M, double epsilon, const InteractionParams& params,
                                  const std::optional<Field>& W, const BoundOptions& opts) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("bd_lower_bound: epsilon must lie in (0, 1)");
  require_cutoff(M, opts.N);
  auto lat = FourierLattice::build(L, opts.N);
  auto est = blank(L, opts.N, params, Method::BdLower);
  const Field WL = lifted_drift(W, lat, est.flags);
  const double c = params.wick_constant;
  const double cY = c - counterterm(L, M, epsilon);  // variance of X + I
  const int G = spectral::fft_friendly_size(3 * lat->K() + 1);
  const double area = L * L;
  const double cell = spectral::cell_area(L, G);

  std::vector<double> potential(static_cast<std::size_t>(opts.n_samples));
  std::vector<double> cost(potential.size());
  std::vector<double> mismatch(potential.size());
  parallel_for(potential.size(), [&](std::size_t i) {
    Rng rng(opts.seed.child(i));
    const Field phi = spectral::sample_gff(lat, rng);
    const Field fresh = spectral::sample_gff(lat, rng);
    const Field low = spectral::project(phi, M);
    const Field Z = std::sqrt(1.0 - epsilon) * low;                   // low modes at time 1 - eps
    const Field I = std::sqrt(epsilon) * spectral::project(fresh, M);  // increment over the window
    const Field Psi = (phi - low) + I + WL;

    // Wick powers at variance c expanded around the variance cY of X + I.
    const auto v = Psi.grid(G);
    double w2 = 0.0, w3 = 0.0;
    for (double x : v) {
      w2 += wick::recenter(2, x, c, cY);
      w3 += wick::recenter(3, x, c, cY);
    }
    w2 *= cell;
    w3 *= cell;
    const double V = params.sigma / 3.0 * w3 + params.A * w2 * w2;
    const double direct = wick::interaction(Psi, params).total;
    mismatch[i] = std::abs(V - direct) / (1.0 + std::abs(direct));
    potential[i] = -V;
    cost[i] = h1_sq(WL - Z) / (2.0 * epsilon);
    (void)area;
  });
  std::vector<double> values(potential.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = potential[i] - cost[i];
    worst = std::max(worst, mismatch[i]);
  }
  if (worst > 1e-8) est.flags.push_back("recentering-mismatch");
  const auto ms = mean_se(values);
  est.log_z = ms.mean;
  est.stderr_ = ms.se;
  est.n_samples = opts.n_samples;
  est.deterministic = mean_se(potential).mean;
  est.correction = -mean_se(cost).mean;
  return est;
}

FreeEnergyEstimate optimize_drift(double L, double N, const InteractionParams& params, int iters,
                                  const SeedSpec& seed, const DriftOptions& opts) {
  auto lat = FourierLattice::build(L, N);
  auto est = blank(L, N, params, Method::BdOptimized);
  std::vector<Field> batch;
  for (long b = 0; b < opts.batch; ++b) batch.push_back(spectral::sample_gff(lat, seed.child(static_cast<std::uint64_t>(b))));

  auto objective = [&](const Field& theta, Field* grad) {
    std::vector<double> vals(batch.size());
    std::vector<Field> grads(batch.size(), Field(lat));
    parallel_for(batch.size(), [&](std::size_t b) {
      if (grad) {
        auto vg = wick::interaction_gradient(batch[b] + theta, params);
        vals[b] = vg.value.total;
        grads[b] = std::move(vg.gradient);
      } else {
        vals[b] = wick::interaction(batch[b] + theta, params).total;
      }
    });
    double J = 0.0;
    for (double v : vals) J += v;
    J = J / static_cast<double>(batch.size()) + 0.5 * h1_sq(theta);
    if (grad) {
      Field g = scaled_by_bracket(theta, 1.0, 1.0);
      for (const auto& gb : grads) g.axpy(1.0 / static_cast<double>(batch.size()), gb);
      *grad = std::move(g);
    }
    return J;
  };

  Field theta(lat);
  Field g(lat);
  double J = objective(theta, &g);
  bool converged = false;
  double step = 1.0;
  int it = 0;
  for (; it <= iters; ++it) {
    const Field d = scaled_by_bracket(g, -1.0, -1.0);
    const double slope = -spectral::inner(g, d);
    if (std::sqrt(slope) <= opts.tolerance) {
      converged = true;
      break;
    }
    if (it == iters) break;
    bool moved = false;
    step = std::min(1.0, 2.0 * step);
    for (int bt = 0; bt < 50; ++bt, step *= 0.5) {
      Field trial = theta;
      trial.axpy(step, d);
      Field gt(lat);
      const double Jt = objective(trial, &gt);
      if (Jt <= J - 1e-4 * step * slope) {
        theta = std::move(trial);
        g = std::move(gt);
        J = Jt;
        moved = true;
        break;
      }
    }
    if (!moved) {
      converged = true;  // stationary to rounding
      break;
    }
  }
  if (!converged) throw NonConvergence("optimize_drift: no convergence after " + std::to_string(iters) + " iterations");

  // Fresh samples; the objective through the drift decomposition.
  const double t2 = spectral::l2_sq(theta);
  const double cost = 0.5 * h1_sq(theta);
  std::vector<double> values(static_cast<std::size_t>(opts.eval_samples));
  parallel_for(values.size(), [&](std::size_t j) {
    const Field phi = spectral::sample_gff(lat, seed.child(static_cast<std::uint64_t>(opts.batch) + j));
    const auto xi = wick::WickData::from_sample(phi, params.wick_constant);
    const auto [phi1, phi2] = wick::drift_decomposition(xi, theta, params);
    values[j] = -(phi1 + phi2 + params.A * t2 * t2) - cost;
  });
  const auto ms = mean_se(values);
  est.log_z = ms.mean;
  est.stderr_ = ms.se;
  est.n_samples = opts.eval_samples;
  est.deterministic = -J;  // sample-average optimum on the training batch
  est.correction = -cost;
  est.optimizer = std::move(theta);
  return est;
}

}  // namespace phi3::free_energy

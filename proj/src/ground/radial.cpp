#include "phi3/ground/radial.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "phi3/errors.hpp"

namespace phi3::ground {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 3>;  // Q, Q', int_0^r Q^2 s ds

constexpr double kR0 = 1e-6;
constexpr double kRLimit = 60.0;

void rhs(const State& y, State& dy, double r) {
  dy[0] = y[1];
  dy[1] = -y[1] / r - 2.0 * y[0] * y[0] + 2.0 * y[0];
  dy[2] = y[0] * y[0] * r;
}

State initial_state(double q0) {
  // series Q = q0 + f r^2 / 4 with f = 2 q0 - 2 q0^2
  const double f = 2.0 * q0 - 2.0 * q0 * q0;
  return {q0 + f * kR0 * kR0 / 4.0, f * kR0 / 2.0, q0 * q0 * kR0 * kR0 / 2.0};
}

enum class Branch { Overshoot, Undershoot };

auto make_stepper(double tol) {
  return odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
}

Branch classify(double q0, double tol) {
  auto stepper = make_stepper(tol);
  stepper.initialize(initial_state(q0), kR0, 1e-4);
  while (stepper.current_time() < kRLimit) {
    stepper.do_step(rhs);
    const State& y = stepper.current_state();
    if (y[0] < 0.0) return Branch::Overshoot;
    if (y[1] > 0.0) return Branch::Undershoot;
  }
  // Indistinguishable from the decaying solution this far out.
  return Branch::Undershoot;
}

double tail_value(double C, double r) { return C * boost::math::cyl_bessel_k(0, std::numbers::sqrt2 * r); }
double tail_derivative(double C, double r) {
  return -C * std::numbers::sqrt2 * boost::math::cyl_bessel_k(1, std::numbers::sqrt2 * r);
}

}  // namespace

RadialProfile shoot_ground_state(double tolerance, const ShootingOptions& opts) {
  if (!(tolerance > 0.0)) throw Error("shoot_ground_state: tolerance must be positive");
  double lo = opts.q_low;
  double hi = opts.q_high;
  if (classify(lo, opts.ode_tolerance) != Branch::Undershoot || classify(hi, opts.ode_tolerance) != Branch::Overshoot) {
    throw BracketNotFound("shoot_ground_state: initial values do not bracket the ground state");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (classify(mid, opts.ode_tolerance) == Branch::Overshoot ? hi : lo) = mid;
  }
  const double q0 = 0.5 * (lo + hi);

  RadialProfile p;
  p.center_value = q0;
  p.step = opts.step;
  const double h = opts.step;
  p.r_grid.push_back(0.0);
  p.values.push_back(q0);
  p.derivatives.push_back(0.0);

  // Follow the shooting solution until it drops below the matching level.
  auto stepper = make_stepper(opts.ode_tolerance);
  stepper.initialize(initial_state(q0), kR0, 1e-4);
  State y{};
  double ode_mass = 0.0;
  for (int k = 1;; ++k) {
    const double r = k * h;
    while (stepper.current_time() < r) stepper.do_step(rhs);
    stepper.calc_state(r, y);
    if (y[0] <= 0.0 || y[1] > 0.0 || r > kRLimit) throw NonConvergence("shoot_ground_state: branch left the ground state");
    p.r_grid.push_back(r);
    p.values.push_back(y[0]);
    p.derivatives.push_back(y[1]);
    if (y[0] < opts.match_level) {
      ode_mass = y[2];
      break;
    }
  }
  p.r_match = p.r_grid.back();
  p.tail_coefficient = p.values.back() / tail_value(1.0, p.r_match);
  const double C = p.tail_coefficient;

  for (int k = static_cast<int>(p.r_grid.size());; ++k) {
    const double r = k * h;
    const double q = tail_value(C, r);
    p.r_grid.push_back(r);
    p.values.push_back(q);
    p.derivatives.push_back(tail_derivative(C, r));
    if (q <= opts.floor_level) break;
  }
  p.r_max = p.r_grid.back();

  const double tail_mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double r) {
        const double q = tail_value(C, r);
        return q * q * r;
      },
      p.r_match, std::numeric_limits<double>::infinity(), 15, 1e-14);
  p.mass = 2.0 * std::numbers::pi * (ode_mass + tail_mass);

  // Second route: trapezoid at h and 2h, one Richardson step, plus the tail
  // beyond r_max from the same quadrature.
  const std::size_t n = p.values.size() - 1;
  const std::size_t n_even = n - (n % 2);
  double t1 = 0.0, t2 = 0.0;
  for (std::size_t i = 0; i <= n_even; ++i) {
    const double f = p.values[i] * p.values[i] * p.r_grid[i];
    const double w1 = (i == 0 || i == n_even) ? 0.5 : 1.0;
    t1 += w1 * f * h;
    if (i % 2 == 0) t2 += w1 * f * 2.0 * h;
  }
  const double romberg = (4.0 * t1 - t2) / 3.0;
  const double beyond = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double r) {
        const double q = tail_value(C, r);
        return q * q * r;
      },
      p.r_grid[n_even], std::numeric_limits<double>::infinity(), 15, 1e-14);
  p.mass_alt = 2.0 * std::numbers::pi * (romberg + beyond);
  return p;
}

const RadialProfile& ground_state() {
  static const RadialProfile profile = shoot_ground_state();
  return profile;
}

double ode_residual(const RadialProfile& p) {
  const double h = p.step;
  const auto& Q = p.values;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < Q.size(); ++i) {
    const double r = p.r_grid[i];
    const double d1 = (Q[i - 2] - 8.0 * Q[i - 1] + 8.0 * Q[i + 1] - Q[i + 2]) / (12.0 * h);
    const double d2 = (-Q[i - 2] + 16.0 * Q[i - 1] - 30.0 * Q[i] + 16.0 * Q[i + 1] - Q[i + 2]) / (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 + d1 / r + 2.0 * Q[i] * Q[i] - 2.0 * Q[i]));
  }
  return worst;
}

double radial_integral(const RadialProfile& p, double (*f)(double, double)) {
  const std::size_t n = p.values.size() - 1;
  const std::size_t n_even = n - (n % 2);
  double s = 0.0;
  for (std::size_t i = 0; i <= n_even; ++i) {
    const double w = (i == 0 || i == n_even) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * f(p.values[i], p.derivatives[i]) * p.r_grid[i];
  }
  return 2.0 * std::numbers::pi * s * p.step / 3.0;
}

double gns_constant() { return 1.5 / std::sqrt(ground_state().mass); }

double gns_ratio(const RadialProfile& p) {
  const double cube = radial_integral(p, [](double q, double) { return std::abs(q) * q * q; });
  const double grad = radial_integral(p, [](double, double dq) { return dq * dq; });
  const double mass = radial_integral(p, [](double q, double) { return q * q; });
  return cube / (std::sqrt(grad) * mass);
}

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "r,Q\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.values.size(); ++i) out << p.r_grid[i] << ',' << p.values[i] << '\n';
}

}  // namespace phi3::ground

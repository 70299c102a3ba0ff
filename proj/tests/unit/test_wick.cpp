#include <cmath>
#include <random>

#include "doctest.h"
#include "phi3/errors.hpp"
#include "phi3/spectral/gff.hpp"
#include "phi3/spectral/ops.hpp"
#include "phi3/wick/hermite.hpp"
#include "phi3/wick/interaction.hpp"

using namespace phi3;
using namespace phi3::spectral;
using namespace phi3::wick;

TEST_CASE("hermite examples") {
  CHECK(hermite(2, 2, 1) == 3.0);
  CHECK(hermite(3, 2, 1) == 2.0);
  CHECK(hermite(1, 1.25, 7.0) == 1.25);
  CHECK_THROWS_AS(hermite(4, 1, 1), UnsupportedDegree);
  CHECK_THROWS_AS(hermite(0, 1, 1), UnsupportedDegree);
  CHECK_THROWS_AS(recenter(5, 1, 1, 1), UnsupportedDegree);
}

TEST_CASE("recentering examples") {
  CHECK(recenter(3, 2, 2, 1) == -4.0);
  CHECK(hermite(3, 2, 2) == -4.0);
  CHECK(recenter(2, 0, 5, 3) == -5.0);
  CHECK(hermite(2, 0, 5) == -5.0);
}

TEST_CASE("recentering agrees with direct evaluation to 2 ulp") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ux(-10, 10), uc(0, 20);
  std::uniform_int_distribution<int> uk(1, 3);
  for (int i = 0; i < 10000; ++i) {
    const int k = uk(gen);
    const double x = ux(gen), c1 = uc(gen), c2 = uc(gen);
    const double a = hermite(k, x, c1);
    const double b = recenter(k, x, c1, c2);
    const double ulp = std::nextafter(std::abs(a), INFINITY) - std::abs(a);
    CHECK(std::abs(a - b) <= 2 * ulp);
    if (i % 100 == 0) CHECK(recenter(k, x, c1, c1) == a);
  }
}

TEST_CASE("wick powers of simple fields") {
  auto lat = FourierLattice::build(1, 1, 8);
  Field one = Field::constant(lat, 1.0);
  CHECK(wick_square(one, 1.0).is_zero());
  Field cube = wick_cube(one, 1.0);
  CHECK(cube.integral() == doctest::Approx(-2.0));
  CHECK(cube[0].imag() == 0.0);
  const double c = tadpole(1, 1);
  Field sq = wick_square(Field(lat), c);
  CHECK(sq.integral() == doctest::Approx(-c));
  CHECK(sq.lattice().N() == 2.0);
  CHECK(wick_cube(Field(lat), c).is_zero());
  CHECK_THROWS_AS(wick_square(one, 1.0, 4), AliasingError);
  CHECK_THROWS_AS(wick_cube(one, 1.0, 6), AliasingError);
}

TEST_CASE("wick square matches direct convolution") {
  auto lat = FourierLattice::build(2, 1);
  Field f = sample_gff(lat, SeedSpec{4, 4});
  Field sq = wick_square(f, 0.0);
  const auto& big = sq.lattice();
  for (std::size_t t = 0; t < big.size(); t += 3) {
    const auto& m = big.mode(t);
    std::complex<double> s = 0;
    for (std::size_t a = 0; a < f.size(); ++a) {
      const auto& ma = lat->mode(a);
      if (auto b = lat->index_of(m.n1 - ma.n1, m.n2 - ma.n2)) s += f[a] * f[*b];
    }
    CHECK(std::abs(sq[t] - s / lat->L()) < 1e-12);
  }
}

TEST_CASE("interaction examples") {
  auto lat0 = FourierLattice::build(1, 0, 8);
  auto p = InteractionParams::for_lattice(*lat0, 0.0, 1.0);
  CHECK(p.wick_constant == 1.0);
  auto v = interaction(Field(lat0), p);
  CHECK(v.quartic == doctest::Approx(1.0));
  CHECK(v.cubic == 0.0);
  auto q = InteractionParams::for_lattice(*lat0, 3.0, 0.0);
  v = interaction(Field::constant(lat0, 1.0), q);
  CHECK(v.cubic == doctest::Approx(-2.0));
  CHECK(v.total == v.cubic + v.quartic);

  auto lat = FourierLattice::build(2, 2);
  Field f = sample_gff(lat, SeedSpec{1, 1});
  CHECK(interaction(f, InteractionParams{0, 0, tadpole(2, 2)}).total == 0.0);
}

TEST_CASE("interaction agrees with integrals of wick powers") {
  auto lat = FourierLattice::build(2, 1.5);
  auto p = InteractionParams::for_lattice(*lat, 0.7, 1.3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Field f = sample_gff(lat, SeedSpec{s, 0});
    auto v = interaction(f, p);
    const double w2 = wick_square(f, p.wick_constant).integral();
    const double w3 = wick_cube(f, p.wick_constant).integral();
    CHECK(v.cubic == doctest::Approx(p.sigma / 3 * w3).epsilon(1e-10));
    CHECK(v.quartic == doctest::Approx(p.A * w2 * w2).epsilon(1e-10));
    CHECK(v.quartic >= 0.0);
  }
}

TEST_CASE("interaction gradient matches finite differences") {
  auto lat = FourierLattice::build(1, 2);
  auto p = InteractionParams::for_lattice(*lat, 1.1, 0.4);
  Field f = sample_gff(lat, SeedSpec{3, 9});
  Field dir = sample_gff(lat, SeedSpec{3, 10});
  auto vg = interaction_gradient(f, p);
  CHECK(vg.value.total == doctest::Approx(interaction(f, p).total).epsilon(1e-12));
  const double h = 1e-5;
  const double fd = (interaction(f + h * dir, p).total - interaction(f - h * dir, p).total) / (2 * h);
  CHECK(inner(vg.gradient, dir) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("drift decomposition") {
  auto lat = FourierLattice::build(2, 1.5);
  auto p = InteractionParams::for_lattice(*lat, 0.9, 0.6);
  SUBCASE("theta = 0") {
    auto xi = WickData::from_sample(sample_gff(lat, SeedSpec{1, 2}), p.wick_constant);
    auto [a, b] = drift_decomposition(xi, Field(lat), p);
    CHECK(a == doctest::Approx(p.sigma / 3 * xi.three.integral()));
    CHECK(b == doctest::Approx(p.A * std::pow(xi.two.integral(), 2)));
  }
  SUBCASE("zero data") {
    Field theta = sample_gff(lat, SeedSpec{1, 3});
    WickData xi{Field(lat), wick_square(Field(lat), 0.0), wick_cube(Field(lat), 0.0)};
    auto [a, b] = drift_decomposition(xi, theta, p);
    CHECK(a == doctest::Approx(p.sigma / 3 * cube_integral(theta)).epsilon(1e-12));
    CHECK(std::abs(b) < 1e-12);
  }
  SUBCASE("identity against direct interaction") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      Field phi = sample_gff(lat, SeedSpec{s, 100});
      Field theta = project(sample_gff(lat, SeedSpec{s, 200}), 1.0);
      auto xi = WickData::from_sample(phi, p.wick_constant);
      auto [a, b] = drift_decomposition(xi, theta, p);
      const double t2 = l2_sq(theta);
      const double direct = interaction(phi + theta, p).total;
      CHECK(a + b + p.A * t2 * t2 == doctest::Approx(direct).epsilon(1e-8));
    }
  }
  SUBCASE("mismatched lattices") {
    auto other = FourierLattice::build(2, 1.0);
    auto xi = WickData::from_sample(sample_gff(lat, SeedSpec{1, 2}), p.wick_constant);
    CHECK_THROWS_AS(drift_decomposition(xi, Field(other), p), CutoffMismatch);
  }
}

TEST_CASE("Wick integrals have mean zero under the GFF") {
  for (double L : {1.0, 2.0}) {
    for (double N : {1.0, 4.0}) {
      auto lat = FourierLattice::build(L, N);
      const double c = tadpole(L, N);
      const int n = 20000;
      Rng rng(SeedSpec{77, static_cast<std::uint64_t>(L * 10 + N)});
      double s2 = 0, ss2 = 0, s3 = 0, ss3 = 0;
      for (int k = 0; k < n; ++k) {
        Field f = sample_gff(lat, rng);
        const double w2 = l2_sq(f) - c * L * L;
        const double w3 = cube_integral(f) - 3 * c * f.integral();
        s2 += w2, ss2 += w2 * w2, s3 += w3, ss3 += w3 * w3;
      }
      const double m2 = s2 / n, m3 = s3 / n;
      CHECK(std::abs(m2) < 3 * std::sqrt((ss2 / n - m2 * m2) / n));
      CHECK(std::abs(m3) < 3 * std::sqrt((ss3 / n - m3 * m3) / n));
      // Var int :phi^2: = 2 sum <lambda>^-4 exactly
      double v2 = 0;
      for (std::size_t i = 0; i < lat->size(); ++i) v2 += 2 / std::pow(lat->bracket_sq(i), 2);
      const double var = ss2 / n - m2 * m2;
      CHECK(std::abs(var - v2) < 0.1 * v2);
    }
  }
}

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

#include "blz/grid.hpp"

using namespace blz;

namespace {

Distribution random_field(const VelocityGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Distribution f(g);
  for (auto& x : f.values) x = uni(rng);
  return f;
}

}  // namespace

TEST_CASE("grid conventions") {
  const auto g = make_grid(8, 4.0);
  CHECK(g.n() == 8);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.freq_spacing() == doctest::Approx(M_PI / 4.0));
  CHECK(g.axis_velocity(4) == doctest::Approx(0.0));
  CHECK(g.axis_frequency(4) == doctest::Approx(0.0));
  CHECK(g.axis_wavenumber(0) == -4);
  CHECK(g.size() == 512);
  CHECK(g.index(1, 2, 3) == (1 * 8 + 2) * 8 + 3);
}

TEST_CASE("transform round trip and Parseval") {
  const auto g = make_grid(16, 4.0);
  const auto f = random_field(g, 7);
  const auto F = forward_transform(f);
  const auto back = inverse_transform(F);
  double max_err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    max_err = std::max(max_err, std::abs(f.values[i] - back.values[i]));
  CHECK(max_err < 1e-12);

  const double h3 = std::pow(g.spacing(), 3);
  const double l3 = std::pow(2.0 * g.half_width(), 3);
  double phys = 0.0, spec = 0.0;
  for (double v : f.values) phys += v * v;
  for (const auto& c : F.coeff) spec += std::norm(c);
  CHECK(h3 * phys == doctest::Approx(spec / l3).epsilon(1e-12));
}

TEST_CASE("Gaussian transform matches the closed form") {
  // f = e^{-|v|^2/2}  ==>  fhat(xi) = (2 pi)^{3/2} e^{-|xi|^2/2}; box and
  // aliasing errors are ~e^{-L^2/2} at N=32, L=8.
  const auto g = make_grid(32, 8.0);
  Distribution f(g);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      for (int k = 0; k < 32; ++k)
        f.values[g.index(i, j, k)] =
            std::exp(-0.5 * norm2(g.velocity(i, j, k)));
  const auto F = forward_transform(f);
  const double amp = std::pow(2.0 * M_PI, 1.5);
  for (int a : {16, 18, 21}) {
    const Vec3 xi = g.frequency(a, 16, 17);
    const double expect = amp * std::exp(-0.5 * norm2(xi));
    CHECK(F.coeff[g.index(a, 16, 17)].real() ==
          doctest::Approx(expect).epsilon(1e-8));
    CHECK(std::abs(F.coeff[g.index(a, 16, 17)].imag()) < 1e-10);
  }
}

TEST_CASE("midpoint quadrature with registered weights") {
  const auto g = make_grid(16, 6.0);
  Distribution f(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k)
        f.values[g.index(i, j, k)] =
            std::exp(-0.5 * norm2(g.velocity(i, j, k)));
  // Closed forms hold up to the e^{-L^2/2} box-truncation floor (~1e-8 at
  // L = 6, amplified by polynomial weights).
  const double mass = quadrature(f, WeightSpec::unit());
  CHECK(mass == doctest::Approx(std::pow(2.0 * M_PI, 1.5)).epsilon(1e-7));
  const double e11 = quadrature(f, WeightSpec::monomial(2, 0, 0));
  CHECK(e11 == doctest::Approx(mass).epsilon(1e-6));  // unit variance
  CHECK(std::abs(quadrature(f, WeightSpec::monomial(1, 0, 0))) < 1e-5);
  // <v>^0 and (1+|v|)^0 degenerate to the plain mass.
  CHECK(quadrature(f, WeightSpec::bracket(0.0)) == doctest::Approx(mass));
  CHECK(quadrature(f, WeightSpec::one_plus_abs(0.0)) == doctest::Approx(mass));
}

TEST_CASE("zero_nyquist clears the unpaired planes") {
  const auto g = make_grid(8, 4.0);
  auto F = forward_transform(random_field(g, 9));
  zero_nyquist(F);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      CHECK(std::abs(F.coeff[g.index(0, a, b)]) == 0.0);
      CHECK(std::abs(F.coeff[g.index(a, 0, b)]) == 0.0);
      CHECK(std::abs(F.coeff[g.index(a, b, 0)]) == 0.0);
    }
}

TEST_CASE("lagrange6 weights reproduce quintic polynomials") {
  double w[6];
  for (double s : {0.0, 0.25, 0.5, 0.875}) {
    lagrange6_weights(s, w);
    for (int deg = 0; deg <= 5; ++deg) {
      double acc = 0.0;
      for (int i = 0; i < 6; ++i) acc += w[i] * std::pow(i - 2.0, deg);
      CHECK(acc == doctest::Approx(std::pow(s, deg)).epsilon(1e-12));
    }
  }
}

TEST_CASE("trig interpolant is exact on band-limited data") {
  const auto g = make_grid(8, 4.0);
  // Two low modes with known coefficients.
  const double k1 = M_PI / 4.0, k2 = M_PI / 2.0;
  Distribution f(g);
  auto fun = [&](const Vec3& v) {
    return 1.0 + 0.5 * std::cos(k1 * v[0]) * std::sin(k2 * v[1]) +
           0.25 * std::cos(k1 * (v[1] + v[2]));
  };
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k)
        f.values[g.index(i, j, k)] = fun(g.velocity(i, j, k));
  const TrigInterpolant itp(f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-4.0, 4.0);
  for (int t = 0; t < 50; ++t) {
    const Vec3 v = {uni(rng), uni(rng), uni(rng)};
    CHECK(itp(v) == doctest::Approx(fun(v)).epsilon(2e-5));
  }
  // On-lattice evaluation is exact for both interpolants.
  const Vec3 node = g.velocity(3, 5, 6);
  CHECK(itp(node) == doctest::Approx(f.values[g.index(3, 5, 6)]).epsilon(1e-12));
  CHECK(interpolate_periodic(f, node) ==
        doctest::Approx(f.values[g.index(3, 5, 6)]).epsilon(1e-12));
}

TEST_CASE("auto refine factor stays within the axis budget") {
  for (int n : {6, 8, 16, 32, 64}) {
    const int r = auto_refine_factor(n);
    CHECK(r >= 1);
    CHECK(r <= 16);
    CHECK((r & (r - 1)) == 0);
  }
  CHECK(auto_refine_factor(8) * 8 <= 144);
  CHECK(auto_refine_factor(64) >= 2);
}

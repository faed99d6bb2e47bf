#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "lamekit/errors.hpp"
#include "lamekit/numerics/ode.hpp"
#include "lamekit/numerics/polynomial.hpp"
#include "lamekit/numerics/quadrature.hpp"
#include "lamekit/numerics/roots.hpp"
#include "lamekit/numerics/tolerances.hpp"

using namespace lamekit;
using std::numbers::pi;

TEST_CASE("polynomial arithmetic and trimming") {
  const Polynomial p{1.0, -3.0, 2.0};  // (1 - t)(1 - 2t)
  CHECK(p.degree() == 2);
  CHECK(p(1.0) == 0.0);
  CHECK(p(0.5) == 0.0);
  CHECK(p(3.0) == doctest::Approx(10.0));
  CHECK(p.derivative() == Polynomial{-3.0, 4.0});
  CHECK(p.derivative(3).is_zero());
  CHECK(p.derivative(3).degree() == -1);

  const Polynomial q{0.0, 1.0};
  CHECK((p * q) == Polynomial{0.0, 1.0, -3.0, 2.0});
  CHECK((p - p).is_zero());
  CHECK((p + Polynomial{0.0, 0.0, -2.0}).degree() == 1);
  CHECK(Polynomial{1.0, 0.0, 0.0}.degree() == 0);
  CHECK(Polynomial::monomial(3, 2.0)[3] == 2.0);
  CHECK(p.max_abs_coeff() == 3.0);
  CHECK(p[7] == 0.0);
}

TEST_CASE("compose_affine matches direct substitution") {
  const Polynomial p{2.0, -1.0, 0.5, 3.0};
  const Polynomial r = p.compose_affine(-2.0, 0.75);
  for (double t : {-1.3, 0.0, 0.4, 2.2}) CHECK(r(t) == doctest::Approx(p(-2.0 * t + 0.75)).epsilon(1e-14));
}

TEST_CASE("poly_eval_many agrees with Horner one at a time") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(9);
  for (auto& v : c) v = u(rng);
  const Polynomial p(c);
  std::vector<double> xs(37);
  for (auto& x : xs) x = u(rng);
  const auto ys = poly_eval_many(p, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(ys[i] == doctest::Approx(p(xs[i])).epsilon(1e-13));
}

TEST_CASE("DOPRI5 reproduces the harmonic oscillator both directions") {
  const VectorField f = [](double, std::span<const double> u, std::span<double> du) {
    du[0] = u[1];
    du[1] = -u[0];
  };
  const double u0[2] = {0.0, 1.0};
  const OdeSolution fw = integrate_ode(f, 0.0, u0, 10.0);
  CHECK(fw.final_state()[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-8));
  for (double x : {0.3, 2.71, 7.5}) {
    CHECK(std::abs(fw.component(x, 0) - std::sin(x)) < 1e-8);
    CHECK(std::abs(fw.component(x, 1) - std::cos(x)) < 1e-8);
  }
  CHECK(fw.component(0.0, 0) == 0.0);
  CHECK(fw.max_abs_component(0) == doctest::Approx(1.0).epsilon(1e-6));
  for (double e : fw.error_estimates()) CHECK(e <= 1.0);

  const OdeSolution bw = integrate_ode(f, 0.0, u0, -4.0);
  CHECK(std::abs(bw.final_state()[0] - std::sin(-4.0)) < 1e-8);
  CHECK(std::abs(bw.component(-1.5, 1) - std::cos(-1.5)) < 1e-8);
}

TEST_CASE("DOPRI5 gives up on finite-time blow-up") {
  const VectorField f = [](double, std::span<const double> u, std::span<double> du) { du[0] = u[0] * u[0]; };
  const double u0[1] = {1.0};
  CHECK_THROWS_AS(integrate_ode(f, 0.0, u0, 2.0), StepSizeUnderflow);
}

TEST_CASE("adaptive Gauss-Kronrod") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi, 1e-13) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 1.0, 0.0, 1e-13) ==
        doctest::Approx(1.0 - std::numbers::e).epsilon(1e-13));
  // sqrt has an endpoint singularity in its derivative only
  CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / x; }, -1.0, 1.0, 1e-10), SingularIntegrand);
}

TEST_CASE("cumulative quadrature from an interior base point") {
  const Grid g(-1.0, 2.0, 31);
  const Grid F = cumulative_quadrature([](double x) { return std::cos(x); }, 0.5, g, 1e-13);
  for (std::size_t i = 0; i < g.samples; ++i) {
    const double x = g.node(i);
    CHECK(F.values[i] == doctest::Approx(std::sin(x) - std::sin(0.5)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Grid(1.0, 1.0, 3), ParseError);
  CHECK_THROWS_AS(Grid(0.0, 1.0, 1), ParseError);
}

TEST_CASE("root scan finds every sign change") {
  const auto roots = find_roots_scan([](double x) { return std::sin(x); }, 1.0, 10.0, 200, 1e-12);
  REQUIRE(roots.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(roots[static_cast<std::size_t>(k)] - (k + 1) * pi) < 1e-11);

  CHECK(find_roots_scan([](double x) { return x * x + 1.0; }, -3.0, 3.0, 50, 1e-12).empty());

  const double r = refine_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, -2.0, 6.0, 1e-14);
  CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
}

TEST_CASE("roots_from_samples skips invalid nodes and keeps exact zeros") {
  const ScalarFunction f = [](double x) { return x - 0.25; };
  std::vector<ScanSample> s;
  for (int i = 0; i <= 8; ++i) {
    const double x = -1.0 + 0.25 * i;
    s.push_back({x, std::optional<double>(f(x))});
  }
  auto roots = roots_from_samples(f, s, 1e-12);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == 0.25);

  s[5].value.reset();  // x = 0.25 unavailable: the bracket (0, 0.5) is gone too
  CHECK(roots_from_samples(f, s, 1e-12).empty());

  CHECK(dedupe_roots({1.0, 1.0 + 1e-13, 2.0, 0.5}, 1e-9) == std::vector<double>{0.5, 1.0, 2.0});
}

TEST_CASE("tolerance bundles") {
  const Tolerances t = parse_tolerances("rtol=1e-8, xtol=1e-6");
  CHECK(t.rtol == 1e-8);
  CHECK(t.atol == Tolerances{}.atol);
  CHECK(t.xtol == 1e-6);
  CHECK(parse_tolerances("3e-9").rtol == 3e-9);
  CHECK_THROWS_AS(parse_tolerances("rtol=-1"), ParseError);
  CHECK_THROWS_AS(parse_tolerances("speed=3"), ParseError);
  CHECK_THROWS_AS(parse_tolerances("rtol="), ParseError);

  setenv("LAME_KIT_TOL", "atol=1e-15", 1);
  CHECK(default_tolerances().atol == 1e-15);
  unsetenv("LAME_KIT_TOL");
  CHECK(default_tolerances().atol == Tolerances{}.atol);
}

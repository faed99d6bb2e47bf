#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lamekit/eigen.hpp"
#include "lamekit/errors.hpp"
#include "lamekit/numerics/quadrature.hpp"

using namespace lamekit;
using std::numbers::pi;

namespace {

// Roots of the shooting function for w = (9/4) x^4 - 3 x^2 on [-2, 2], from an
// independent DOP853 shooting run at rtol 1e-13.
constexpr double kHat[4] = {-7.47890262723415, -3.0871345414565785, -0.5900914846518563, -0.043254439409039336};

EigenProblem zero_potential(double lmin, double lmax) {
  EigenProblem p;
  p.w = ScalarField::constant(0.0);
  p.a = 0.0;
  p.b = 1.0;
  p.lambda_min = lmin;
  p.lambda_max = lmax;
  return p;
}

}  // namespace

TEST_CASE("Mexican hat potential") {
  const ScalarField w = mexican_hat_field({1.0, 1.0});
  CHECK(w(0.0) == 0.0);
  CHECK(w(1.0) == doctest::Approx(-0.75));
  CHECK(w(1.3) == doctest::Approx(w(-1.3)));
  CHECK(w.derivative(1.0, 1) == doctest::Approx(9.0 - 6.0));
  CHECK_THROWS_AS(mexican_hat_field({0.0, 1.0}), ParseError);
}

TEST_CASE("shooting miss distance") {
  const ScalarField zero = ScalarField::constant(0.0);
  CHECK(std::abs(shoot_miss(zero, -pi * pi, 0.0, 1.0)) < 1e-9);
  CHECK(shoot_miss(zero, -1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));  // y = sin x peaks at x = 1
  CHECK(std::abs(shoot_miss(mexican_hat_field({1.0, 1.0}), -0.0433, -2.0, 2.0)) < 0.02);
}

TEST_CASE("determinant condition for the free particle") {
  const SymmetryFamily fam = constant_family(0.0, {0.0, 1.0});
  CHECK(std::abs(determinant_condition(fam, -pi * pi, 0.0, 1.0)) < 1e-10);
  CHECK(std::abs(determinant_condition(fam, -4 * pi * pi, 0.0, 1.0)) < 1e-10);
  CHECK(std::abs(determinant_condition(fam, -5.0, 0.0, 1.0)) > 0.1);
  // continuous across lambda = 0 where the family turns from hyperbolic to elliptic
  CHECK(determinant_condition(fam, 1e-7, 0.0, 1.0) == doctest::Approx(determinant_condition(fam, -1e-7, 0.0, 1.0)).epsilon(1e-5));
}

TEST_CASE("Dirichlet Laplacian") {
  for (EigenMethod m : {EigenMethod::shooting, EigenMethod::determinant, EigenMethod::both}) {
    EigenProblem p = zero_potential(-50.0, -1.0);
    p.scan_density = 40.0;
    p.method = m;
    if (m != EigenMethod::shooting) p.family = constant_family(0.0, {0.0, 1.0});
    const EigenResult r = solve_eigen(p);
    REQUIRE(r.eigenvalues.size() == 2);
    CHECK(std::abs(r.eigenvalues[0] + 4 * pi * pi) < 1e-6);
    CHECK(std::abs(r.eigenvalues[1] + pi * pi) < 1e-6);
    for (double res : r.residuals) CHECK(std::abs(res) < 1e-6);
    if (m == EigenMethod::both) CHECK(r.method_flags == std::vector<std::string>{"both", "both"});
  }

  // halving the scan step moves nothing and adds nothing
  EigenProblem coarse = zero_potential(-100.0, -1.0);
  coarse.scan_density = 30.0;
  EigenProblem fine = coarse;
  fine.scan_density = 2 * coarse.scan_density;
  const EigenResult a = solve_eigen(coarse), b = solve_eigen(fine);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
    CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-10 * (1 + std::abs(a.eigenvalues[i])));

  // Sturm: the k-th state (ascending E = -lambda) has k - 1 interior zeros
  for (int k = 1; k <= 3; ++k) CHECK(count_interior_zeros(ScalarField::constant(0.0), -k * k * pi * pi, 0.0, 1.0) == k - 1);
}

TEST_CASE("Mexican hat spectrum") {
  EigenProblem p;
  p.w = mexican_hat_field({1.0, 1.0});
  p.a = -2.0;
  p.b = 2.0;
  p.lambda_min = -9.0;
  p.lambda_max = 0.0;
  const EigenResult r = solve_eigen(p);
  REQUIRE(r.eigenvalues.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.eigenvalues[static_cast<std::size_t>(i)] - kHat[i]) < 1e-8);

  // E = -lambda ascending is lambda descending
  for (int i = 0; i < 4; ++i) CHECK(count_interior_zeros(p.w, kHat[3 - i], -2.0, 2.0) == i);

  EigenProblem threaded = p;
  threaded.threads = 3;
  CHECK(solve_eigen(threaded).eigenvalues == r.eigenvalues);
}

TEST_CASE("determinant on a symmetric window with a numerical symmetry") {
  EigenProblem p;
  p.w = mexican_hat_field({1.0, 1.0});
  p.a = -1.5;
  p.b = 1.5;
  p.lambda_min = -12.0;
  p.lambda_max = 0.0;
  p.scan_nodes = 800;
  p.method = EigenMethod::both;
  const EigenResult r = solve_eigen(p);
  REQUIRE_FALSE(r.eigenvalues.empty());
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    CAPTURE(r.eigenvalues[i]);
    CHECK(r.method_flags[i] == "both");
  }
}

TEST_CASE("harmonic oscillator on a wide window") {
  EigenProblem p;
  p.w = ScalarField([](double x) { return Jet{-x * x, -2 * x, -2.0, 0.0}; }, 3);
  p.a = -8.0;
  p.b = 8.0;
  p.lambda_min = -5.5;
  p.lambda_max = -0.5;
  const EigenResult r = solve_eigen(p);
  REQUIRE(r.eigenvalues.size() == 3);
  CHECK(std::abs(r.eigenvalues[0] + 5.0) < 1e-3);
  CHECK(std::abs(r.eigenvalues[1] + 3.0) < 1e-3);
  CHECK(std::abs(r.eigenvalues[2] + 1.0) < 1e-3);
}

TEST_CASE("Lame n = 1 by both methods") {
  // independent oracle: wp through Jacobi sn at 30 digits, DOP853 shooting
  const double oracle[2] = {-43.65305129031, -13.13393456143};
  const Interval dom{0.3, 1.3};
  EigenProblem p;
  const WeierstrassEvaluator ev({2.0, 0.1});
  p.w = ScalarField(
      [ev](double x) {
        const WpValue v = ev(x);
        return Jet{-2 * v.p0 + 0.5, -2 * v.p1, 0.0, 0.0};
      },
      1);
  p.a = dom.lo;
  p.b = dom.hi;
  p.lambda_min = -60.0;
  p.lambda_max = 0.0;
  p.scan_nodes = 1500;
  p.method = EigenMethod::both;
  p.family = lame_even_family(1, 0.5, {2.0, 0.1}, dom);
  const EigenResult r = solve_eigen(p);
  REQUIRE(r.eigenvalues.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(r.eigenvalues[static_cast<std::size_t>(i)] - oracle[i]) < 1e-6);
    CHECK(r.method_flags[static_cast<std::size_t>(i)] == "both");
  }
  CHECK(r.unclassified_nodes == 0);
}

TEST_CASE("density profile") {
  const ScalarField zero = ScalarField::constant(0.0);
  const Grid g = density_profile(zero, -pi * pi, 0.0, 1.0, Grid(0.0, 1.0, 101));
  CHECK(std::abs(g.values[50] - 2.0) < 1e-6);
  for (double v : g.values) CHECK(v >= 0.0);
  const Grid dense = density_profile(zero, -pi * pi, 0.0, 1.0, Grid(0.0, 1.0, 2001));
  double mass = 0.0;  // Simpson on the samples
  for (std::size_t i = 0; i + 2 < dense.samples; i += 2)
    mass += dense.spacing() / 3 * (dense.values[i] + 4 * dense.values[i + 1] + dense.values[i + 2]);
  CHECK(std::abs(mass - 1.0) < 1e-8);

  CHECK_THROWS_AS(density_profile(zero, -5.0, 0.0, 1.0, Grid(0.0, 1.0, 11)), NotAnEigenvalue);

  // lowest Mexican-hat state (largest lambda) is the node-free one
  const ScalarField w = mexican_hat_field({1.0, 1.0});
  const Grid high = density_profile(w, kHat[0], -2.0, 2.0, Grid(-2.0, 2.0, 401));
  CHECK(count_interior_zeros(w, kHat[3], -2.0, 2.0) == 0);
  CHECK(count_interior_zeros(w, kHat[0], -2.0, 2.0) == 3);
  for (double v : high.values) CHECK(v >= 0.0);
}

TEST_CASE("problem validation") {
  EigenProblem p = zero_potential(-1.0, -2.0);
  CHECK_THROWS_AS(solve_eigen(p), ParseError);
  p = zero_potential(-2.0, -1.0);
  p.b = p.a;
  CHECK_THROWS_AS(solve_eigen(p), ParseError);
  p = zero_potential(-5.0, -1.0);
  CHECK(solve_eigen(p).eigenvalues.empty());
}

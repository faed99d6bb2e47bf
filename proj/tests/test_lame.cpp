#include <doctest.h>

#include <cmath>
#include <random>

#include "lamekit/errors.hpp"
#include "lamekit/lame.hpp"

using namespace lamekit;

namespace {

double max_abs(const Polynomial& p) { return p.max_abs_coeff(); }

std::vector<double> nodes(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * i / (n - 1));
  return xs;
}

Polynomial random_poly(std::mt19937_64& rng, int deg) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(static_cast<std::size_t>(deg) + 1);
  for (auto& v : c) v = u(rng);
  return Polynomial(c);
}

}  // namespace

TEST_CASE("R1/R2 small cases") {
  const EllipticInvariants inv{1.3, -0.4};
  const auto zero = r1_r2_polynomials({Polynomial{0.5, -2.0}, {}, inv}, {});
  CHECK(zero.R1.is_zero());
  CHECK(zero.R2.is_zero());

  const auto lin = r1_r2_polynomials({{}, {}, inv}, {Polynomial{0.0, 1.0}, {}});
  CHECK(lin.R1.is_zero());
  CHECK(lin.R2 == Polynomial{0.0, 12.0});

  const auto n1 = r1_r2_polynomials({Polynomial{0.5, -2.0}, {}, inv}, {Polynomial{0.5, 1.0}, {}});
  CHECK(max_abs(n1.R1) <= 1e-12);
  CHECK(max_abs(n1.R2) <= 1e-12);
}

TEST_CASE("printed R1/R2 agree with direct substitution on the curve") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> g(-3.0, 3.0);
  for (int t = 0; t < 40; ++t) {
    const LamePotentialSpec pot{random_poly(rng, t % 3), random_poly(rng, t % 2), {g(rng), g(rng)}};
    const LameSymmetrySpec sym{random_poly(rng, t % 5), random_poly(rng, (t / 2) % 4)};
    const auto a = r1_r2_polynomials(pot, sym);
    const auto b = reduce_lie_equation(pot, sym);
    CHECK(max_abs(a.R1 - b.R1) <= 1e-12 * a.scale);
    CHECK(max_abs(a.R2 - b.R2) <= 1e-12 * a.scale);
  }
}

TEST_CASE("even coefficients match the worked examples") {
  const double c0 = 0.7, g2 = 1.9, g3 = -0.8;
  const EvenFamily f1 = even_coefficients(1, c0, {g2, g3});
  CHECK(f1.c1 == -2.0);
  CHECK(f1.a == std::vector<double>{c0, 1.0});

  const EvenFamily f2 = even_coefficients(2, c0, {g2, g3});
  CHECK(f2.c1 == -6.0);
  CHECK(f2.a[0] == doctest::Approx(c0 * c0 / 9 - g2 / 4));
  CHECK(f2.a[1] == doctest::Approx(c0 / 3));

  const EvenFamily f3 = even_coefficients(3, c0, {g2, g3});
  CHECK(f3.c1 == -12.0);
  CHECK(f3.a[0] == doctest::Approx(c0 * c0 * c0 / 225 - c0 * g2 / 15 - g3 / 4));
  CHECK(f3.a[1] == doctest::Approx(2 * c0 * c0 / 75 - g2 / 4));
  CHECK(f3.a[2] == doctest::Approx(c0 / 5));
  CHECK(f3.a[3] == 1.0);

  CHECK_THROWS_AS(even_coefficients(0, c0, {g2, g3}), UnsupportedN);
}

TEST_CASE("even families solve the reduced Lie equation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 1; n <= 8; ++n) {
    for (int t = 0; t < 10; ++t) {
      const EvenFamily fam = even_coefficients(n, u(rng), {u(rng), u(rng)});
      const auto r = r1_r2_polynomials(fam.potential(), fam.symmetry());
      CHECK(max_abs(r.R1) == 0.0);
      CHECK(max_abs(r.R2) <= 1e-10 * r.scale);
    }
  }
}

TEST_CASE("closed-form c_w") {
  CHECK(even_cw_closed_form(1, 0.0, {0.0, 4.0}) == 1.0);
  CHECK(even_cw_closed_form(2, 3.0, {3.0, 0.7}) == 0.0);
  CHECK(even_cw_closed_form(1, 1.0, {2.0, 3.0}) == 1.25);
  CHECK_THROWS_AS(even_cw_closed_form(4, 1.0, {2.0, 3.0}), UnsupportedN);

  // the c_w polynomial collapses to a constant equal to the printed value
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 1; n <= 3; ++n) {
    for (int t = 0; t < 10; ++t) {
      const double c0 = u(rng);
      const EllipticInvariants inv{u(rng), u(rng)};
      const Polynomial cw = even_cw_polynomial(even_coefficients(n, c0, inv));
      const double expect = even_cw_closed_form(n, c0, inv);
      CHECK(cw[0] == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
      for (std::size_t k = 1; k < cw.coeffs().size(); ++k) CHECK(std::abs(cw[k]) < 1e-10);
    }
  }

  const EvenFamily fam = even_coefficients(1, 1.0, {2.0, 3.0});
  const SymmetryPair p = assemble_fields(fam.potential(), fam.symmetry(), WeierstrassEvaluator({2.0, 3.0}), {0.3, 0.8});
  CHECK(std::abs(p.c_w() - 1.25) < 1e-8);
}

TEST_CASE("odd recurrence") {
  const EllipticInvariants none{0.0, 0.0};
  for (int n = 0; n <= 6; ++n) {
    const OddFamily f = odd_coefficients(n, 0.0, none);
    CHECK(f.c1 == -3.75 - n * (n + 4.0));
    CHECK(f.b[static_cast<std::size_t>(n)] == 1.0);
    for (int j = 0; j < n; ++j) CHECK(f.b[static_cast<std::size_t>(j)] == 0.0);
    const auto r = gc_residuals(f);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
  }
  CHECK(odd_coefficients(0, 1.2, {0.3, 0.4}).B() == Polynomial{1.0});
  CHECK_THROWS_AS(odd_coefficients(-1, 0.0, none), UnsupportedN);
}

TEST_CASE("recurrence rows are the coefficients of R1") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n <= 5; ++n) {
    const OddFamily f = odd_coefficients(n, u(rng), {u(rng), u(rng)});
    const auto r = reduce_lie_equation(f.potential(), f.symmetry());
    CHECK(r.R2.is_zero());
    for (int i = 0; i <= n + 4; ++i) {
      CAPTURE(n);
      CAPTURE(i);
      const double row = odd_row(f, i);
      CHECK(std::abs(r.R1[static_cast<std::size_t>(i)] - row) <= 1e-11 * r.scale);
      if (i >= 3) CHECK(std::abs(row) <= 1e-11 * r.scale);
    }
    const auto gc = gc_residuals(f);
    for (int i = 0; i < 3; ++i) CHECK(gc[static_cast<std::size_t>(i)] == doctest::Approx(r.R1[static_cast<std::size_t>(i)]).epsilon(1e-11).scale(r.scale));
  }
}

TEST_CASE("odd Lie residual equals the closing polynomial on the curve") {
  const double c0 = 0.4, g2 = 1.5, g3 = 0.3;
  const OddFamily f = odd_coefficients(1, c0, {g2, g3});
  const WeierstrassEvaluator ev({g2, g3});
  const ScalarField w = lame_potential_field(f.potential(), ev);
  const ScalarField z = lame_symmetry_field(f.symmetry(), ev);
  const auto gc = gc_residuals(f);
  for (double x : nodes(0.35, 1.0, 14)) {
    const double p = ev(x).p0;
    const double expect = gc[0] + gc[1] * p + gc[2] * p * p;
    CHECK(std::abs(lie_residual(w, z, x) - expect) <= 1e-9 * lie_scale(w, z, x));
  }
}

TEST_CASE("closing-system search reports only verified roots") {
  for (int n = 0; n <= 2; ++n) {
    const auto roots = search_gc_roots(n, 3);
    MESSAGE("n = " << n << ": " << roots.size() << " nontrivial real roots found");
    for (const auto& r : roots) {
      CHECK(r.relative_residual < 1e-9);
      CHECK(std::abs(r.c0) + std::sqrt(std::abs(r.g2)) + std::cbrt(std::abs(r.g3)) > 1e-3);
    }
  }
}

TEST_CASE("trivial odd pair") {
  const OddTrivialPair t0 = odd_trivial_pair(0, 0.0);
  const ScalarField y = t0.solution(0.0, 1.0);
  CHECK(y(4.0) == doctest::Approx(32.0));
  CHECK(y.derivative(1.0, 2) == doctest::Approx(3.75));
  CHECK(t0.w(1.0) * y(1.0) == doctest::Approx(-3.75));

  for (int n = 0; n <= 4; ++n) {
    const double w0 = 0.25 * n;
    const OddTrivialPair t = odd_trivial_pair(n, w0);
    const Interval dom{1.0, 2.0};
    const CwEstimate cw = compute_cw(t.w, t.z, nodes(1.0, 2.0, 50));
    CHECK(std::abs(cw.c_w) <= 1e-10);
    const SymmetryPair p = t.on(dom);
    CHECK(p.symmetry_case() == SymmetryCase::parabolic);
    CHECK(check_pair(p).ok());

    // quadrature solutions against the closed form, after matching values at x = 1
    const FundamentalPair fp = fundamental_solutions(p, 1.5, Grid(1.0, 2.0, 21));
    const ScalarField g = t.solution(0.8, -0.3);
    const double y1a = fp.y1()(1.0), d1a = fp.y1().derivative(1.0, 1);
    const double y2a = fp.y2()(1.0), d2a = fp.y2().derivative(1.0, 1);
    const double det = y1a * d2a - y2a * d1a;
    const double k1 = (g(1.0) * d2a - y2a * g.derivative(1.0, 1)) / det;
    const double k2 = (y1a * g.derivative(1.0, 1) - d1a * g(1.0)) / det;
    for (double x : nodes(1.0, 2.0, 11)) {
      CHECK(std::abs(k1 * fp.y1()(x) + k2 * fp.y2()(x) - g(x)) <= 1e-6 * std::abs(g(x)));
    }
  }
}

TEST_CASE("rational limit of the odd assembly is the trivial pair") {
  for (int n = 0; n <= 3; ++n) {
    const OddFamily f = odd_coefficients(n, 0.0, {0.0, 0.0});
    const WeierstrassEvaluator ev({0.0, 0.0});
    const ScalarField z = lame_symmetry_field(f.symmetry(), ev);
    const ScalarField w = lame_potential_field(f.potential(), ev);
    const OddTrivialPair t = odd_trivial_pair(n, 0.0);
    for (double x : {0.6, 1.1, 1.7}) {
      CHECK(z(x) == doctest::Approx(t.z(x)).epsilon(1e-13));  // factor exactly 1
      CHECK(w(x) == doctest::Approx(t.w(x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("assembled fields: chain rule and finite differences") {
  const WeierstrassEvaluator ev({2.0, 0.1});
  const EvenFamily f1 = even_coefficients(1, 0.5, {2.0, 0.1});
  const ScalarField z1 = lame_symmetry_field(f1.symmetry(), ev);
  for (double x : {0.4, 0.9}) CHECK(z1.derivative(x, 1) == ev(x).p1);

  const OddFamily fo = odd_coefficients(2, 0.3, {2.0, 0.1});
  for (const ScalarField& z : {lame_symmetry_field(even_coefficients(3, 0.5, {2.0, 0.1}).symmetry(), ev),
                               lame_symmetry_field(fo.symmetry(), ev)}) {
    for (double x : nodes(0.4, 1.2, 5)) {
      const double h = 1e-5;
      const Jet lo = z.jet(x - h), hi = z.jet(x + h), mid = z.jet(x);
      for (int k = 0; k < 3; ++k) {
        const double fd = (hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)]) / (2 * h);
        CHECK(std::abs(fd - mid[static_cast<std::size_t>(k + 1)]) <= 1e-5 * std::max(1.0, std::abs(mid[static_cast<std::size_t>(k + 1)])));
      }
    }
  }

  const EvenFamily f2 = even_coefficients(2, -0.4, {2.0, 0.1});
  const SymmetryPair p = assemble_fields(f2.potential(), f2.symmetry(), ev, {0.3, 1.3});
  for (double x : nodes(0.3, 1.3, 100)) CHECK(std::abs(lie_residual(p.w(), p.z(), x)) <= 1e-7 * lie_scale(p.w(), p.z(), x));

  CHECK_THROWS_AS(assemble_fields(f2.potential(), f2.symmetry(), ev, {0.0, 1.0}), PoleProximity);
}

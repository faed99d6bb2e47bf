#pragma once

// Lie-equation reduction on the curve p1^2 = 4p0^3 - g2 p0 - g3 for potentials
// w = C(p0) + p1 E(p0) and symmetries z = A(p0) + p1 B(p0), with p0 = wp(x),
// p1 = wp'(x). Substitution leaves R1(p0) + p1 R2(p0) = 0.

#include <array>
#include <vector>

#include "lamekit/elliptic.hpp"
#include "lamekit/numerics/polynomial.hpp"
#include "lamekit/symmetry.hpp"

namespace lamekit {

struct LamePotentialSpec {
  Polynomial C;
  Polynomial E;
  EllipticInvariants invariants;
};

struct LameSymmetrySpec {
  Polynomial A;
  Polynomial B;
};

struct ReducedLieEquation {
  Polynomial R1;
  Polynomial R2;
  /// Largest coefficient magnitude among the individual terms summed into R1/R2;
  /// the yardstick for calling a cancelled coefficient zero.
  double scale = 0.0;
};

/// R1 and R2 assembled term by term from their closed expressions.
ReducedLieEquation r1_r2_polynomials(const LamePotentialSpec& pot, const LameSymmetrySpec& sym);

/// The same pair obtained independently: z''' + 4 w z' + 2 w' z computed in the ring
/// of P(p0) + p1 Q(p0) with p0' = p1, p1' = 6p0^2 - g2/2 and p1^2 reduced by the curve.
ReducedLieEquation reduce_lie_equation(const LamePotentialSpec& pot, const LameSymmetrySpec& sym);

struct EvenFamily {
  int n;
  double c0;
  EllipticInvariants invariants;
  double c1;               // -n(n+1)
  std::vector<double> a;   // a_0 .. a_n, a_n = 1

  Polynomial A() const { return Polynomial(a); }
  Polynomial C() const { return Polynomial{c0, c1}; }
  LamePotentialSpec potential() const { return {C(), {}, invariants}; }
  LameSymmetrySpec symmetry() const { return {A(), {}}; }
};

EvenFamily even_coefficients(int n, double c0, const EllipticInvariants& inv);

/// Closed forms of c_w for n = 1, 2, 3; UnsupportedN otherwise.
double even_cw_closed_form(int n, double c0, const EllipticInvariants& inv);

/// c_w = C A^2 - f A'^2/4 + A (f A'' + (6p0^2 - g2/2) A')/2 as a polynomial in p0 (f the curve cubic).
/// For a genuine even pair every coefficient above the constant cancels.
Polynomial even_cw_polynomial(const EvenFamily& fam);

struct OddFamily {
  int n;
  double c0;
  EllipticInvariants invariants;
  double c1;              // -15/4 - n(n+4)
  std::vector<double> b;  // b_0 .. b_n, b_n = 1

  Polynomial B() const { return Polynomial(b); }
  Polynomial C() const { return Polynomial{c0, c1}; }
  LamePotentialSpec potential() const { return {C(), {}, invariants}; }
  LameSymmetrySpec symmetry() const { return {{}, B()}; }
};

/// Solves the odd-case recurrence downward from b_n = 1. Throws RecurrenceBreakdown if the
/// pivot 4(i-1)(4c1 + 4i^2 - 8i + 3) multiplying b_{i-3} vanishes.
OddFamily odd_coefficients(int n, double c0, const EllipticInvariants& inv);

/// Coefficient of p0^i in R1 for the odd ansatz (the i-th row of the recurrence).
double odd_row(const OddFamily& fam, int i);

/// The three closing equations in (c0, g2, g3): rows i = 0, 1, 2.
std::array<double, 3> gc_residuals(const OddFamily& fam);
/// Largest term magnitude entering each closing equation.
std::array<double, 3> gc_term_scale(const OddFamily& fam);

struct GcRoot {
  double c0;
  double g2;
  double g3;
  std::array<double, 3> residuals;
  double relative_residual;  // max_i |r_i| / term scale_i
};

/// Damped Newton from a coarse multi-start grid in [-box, box]^3. Only nontrivial roots
/// (weighted size |c0| + |g2|^(1/2) + |g3|^(1/3) > 1e-3) with relative residual < 1e-9 are reported.
std::vector<GcRoot> search_gc_roots(int n, int starts_per_axis = 5, double box = 5.0);

/// Closed-form parabolic pair at g2 = g3 = c0 = 0:
/// w = (-15/4 - n(n+4)) (x+w0)^-2, z = -2 (x+w0)^(-2n-3).
struct OddTrivialPair {
  int n;
  double w0;
  double c1;
  ScalarField w;
  ScalarField z;

  /// alpha1 (x+w0)^(-3/2-n) + alpha2 (x+w0)^(n+5/2), derivatives to order 2.
  ScalarField solution(double alpha1, double alpha2) const;
  /// The pair on `domain` (which must avoid x = -w0), classified parabolic with c_w = 0.
  SymmetryPair on(Interval domain) const;
};

OddTrivialPair odd_trivial_pair(int n, double w0);

/// w and z as scalar fields through wp, packaged and classified on `domain`.
SymmetryPair assemble_fields(const LamePotentialSpec& pot, const LameSymmetrySpec& sym,
                             const WeierstrassEvaluator& eval, Interval domain);

/// The potential field alone (order 1).
ScalarField lame_potential_field(const LamePotentialSpec& pot, const WeierstrassEvaluator& eval);
/// The symmetry field alone (order 3).
ScalarField lame_symmetry_field(const LameSymmetrySpec& sym, const WeierstrassEvaluator& eval);

}  // namespace lamekit

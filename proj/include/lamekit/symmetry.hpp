#pragma once

// Symmetries of y'' + w y = 0: solutions z of the Lie equation
// z''' + 4 w z' + 2 w' z = 0, the invariant c_w attached to a (w, z) pair,
// and the closed-form fundamental solutions that a nonvanishing z yields.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lamekit/numerics/quadrature.hpp"
#include "lamekit/scalar_field.hpp"

namespace lamekit {

enum class SymmetryCase { elliptic, hyperbolic, parabolic };

std::string_view to_string(SymmetryCase c) noexcept;

/// z''' + 4 w z' + 2 w' z at x.
double lie_residual(const ScalarField& w, const ScalarField& z, double x);
/// max(|z'''|, |4 w z'|, |2 w' z|) at x; the natural yardstick for lie_residual.
double lie_scale(const ScalarField& w, const ScalarField& z, double x);

/// w = c_w / z^2 + (z'/z)^2 / 4 - z'' / (2 z), with analytic w'. Evaluating the
/// result throws ZeroSymmetry where |z| < 1e-12 max(1, |z'|, |z''|).
ScalarField potential_from_symmetry(const ScalarField& z, double c_w);

/// w z^2 - z'^2/4 + z z''/2 at one point.
double cw_at(const ScalarField& w, const ScalarField& z, double x);

struct CwEstimate {
  double c_w;            // median over nodes
  double max_deviation;  // max |sample - median|
};

CwEstimate compute_cw(const ScalarField& w, const ScalarField& z, std::span<const double> xs);

inline constexpr double kClassificationTolerance = 1e-9;

SymmetryCase classify_case(double c_w, double scale);

/// A potential, one of its symmetries, and the derived constant c_w on a domain.
class SymmetryPair {
 public:
  /// Estimates c_w as the median over `nodes` uniform points of `domain` and classifies it.
  static SymmetryPair build(ScalarField w, ScalarField z, Interval domain, std::size_t nodes = 64);

  SymmetryPair(ScalarField w, ScalarField z, Interval domain, double c_w, double classification_scale);

  const ScalarField& w() const noexcept { return w_; }
  const ScalarField& z() const noexcept { return z_; }
  const Interval& domain() const noexcept { return domain_; }
  double c_w() const noexcept { return c_w_; }
  SymmetryCase symmetry_case() const noexcept { return case_; }
  /// sqrt|c_w|, zero in the parabolic case.
  double q0() const noexcept { return q0_; }
  double classification_scale() const noexcept { return scale_; }

 private:
  ScalarField w_;
  ScalarField z_;
  Interval domain_;
  double c_w_;
  double scale_;
  SymmetryCase case_;
  double q0_;
};

struct PairDiagnostics {
  double max_relative_lie_residual = 0.0;  // max |L_w z| / lie_scale
  double c_w = 0.0;
  double cw_deviation = 0.0;
  bool lie_ok = false;
  bool cw_ok = false;
  bool ok() const noexcept { return lie_ok && cw_ok; }
};

/// Runs the pair invariants on `nodes` uniform points of the domain: relative Lie residual
/// <= lie_tol and c_w deviation <= cw_tol (1 + |c_w|).
PairDiagnostics check_pair(const SymmetryPair& pair, std::size_t nodes = 64, double lie_tol = 1e-7,
                           double cw_tol = 1e-7);

/// Phi(x) = int_{x_b}^{x} f(t) dt, tabulated on a grid and completed between nodes by
/// adaptive quadrature from the nearest node.
class Antiderivative {
 public:
  Antiderivative(ScalarFunction f, double x_b, const Grid& grid, double rtol);

  double operator()(double x) const;
  double base_point() const noexcept { return x_b_; }
  const Grid& table() const noexcept { return table_; }

 private:
  ScalarFunction f_;
  double x_b_;
  double rtol_;
  Grid table_;
};

/// Throws ZeroSymmetry when z changes sign between grid nodes or is below the magnitude floor.
void require_nonvanishing(const ScalarField& z, const Grid& grid);

/// Two independent solutions of y'' + w y = 0 built from a symmetry by quadrature.
/// y1, y2 carry derivatives up to order 2.
class FundamentalPair {
 public:
  FundamentalPair(ScalarField y1, ScalarField y2, std::shared_ptr<const Antiderivative> phi, SymmetryCase c,
                  double q0, double scale);

  const ScalarField& y1() const noexcept { return y1_; }
  const ScalarField& y2() const noexcept { return y2_; }
  const Antiderivative& phi() const noexcept { return *phi_; }
  std::shared_ptr<const Antiderivative> phi_ptr() const noexcept { return phi_; }
  SymmetryCase symmetry_case() const noexcept { return case_; }
  double q0() const noexcept { return q0_; }

  /// y1 y2' - y1' y2
  double wronskian(double x) const;
  /// The same pair rescaled so that the Wronskian equals -1.
  FundamentalPair normalized() const;

 private:
  ScalarField y1_;
  ScalarField y2_;
  std::shared_ptr<const Antiderivative> phi_;
  SymmetryCase case_;
  double q0_;
  double scale_;  // factor already applied to both solutions
};

FundamentalPair fundamental_solutions(const SymmetryPair& pair, double x_b, const Grid& grid, double rtol = 1e-12);

struct SymmetryTriple {
  ScalarField z1;
  ScalarField z2;
  ScalarField z3;
};

/// (z, z sin 2q0 Phi, z cos 2q0 Phi) and the hyperbolic/parabolic analogues.
SymmetryTriple symmetry_triple(const SymmetryPair& pair, double x_b, const Grid& grid, double rtol = 1e-12);

/// Linear generating function phi = a(x) u0 + b(x) u1 on y'' + w y = 0.
struct LinearSymmetry {
  ScalarField a;
  ScalarField b;

  static LinearSymmetry u0();
  static LinearSymmetry u1();
  /// phi_z = z u1 - z'/2 u0
  static LinearSymmetry from_symmetry(const ScalarField& z);
};

/// H = phi1 D(phi2) - phi2 D(phi1) evaluated on the solution y, with D the total derivative
/// along the equation (u1' = -w u0).
double first_integral(const LinearSymmetry& phi1, const LinearSymmetry& phi2, const ScalarField& w,
                      const ScalarField& y, double x);

/// [z1, z2] = z1' z2 - z1 z2'
double sl2_bracket(const ScalarField& z1, const ScalarField& z2, double x);

/// One round of the hierarchy: z_hat = z (a1 + a2 s + a3 c) over the triple, w_hat = w + c_hat / z_hat^2.
/// The result's domain is the grid interval. Throws ZeroSymmetry when z_hat vanishes there.
SymmetryPair hierarchy_step(const SymmetryPair& pair, double c_hat, const std::array<double, 3>& alpha, double x_b,
                            const Grid& grid, double rtol = 1e-12);

}  // namespace lamekit

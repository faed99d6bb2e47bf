#pragma once

// Dirichlet problems y(a) = y(b) = 0 for y'' + (w(x) - lambda) y = 0.
// In the textbook form -y'' + V y = E y this is V = -w, E = -lambda.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lamekit/elliptic.hpp"
#include "lamekit/numerics/ode.hpp"
#include "lamekit/numerics/quadrature.hpp"
#include "lamekit/numerics/tolerances.hpp"
#include "lamekit/scalar_field.hpp"
#include "lamekit/symmetry.hpp"

namespace lamekit {

struct MexicanHatSpec {
  double nu = 1.0;
  double delta = 1.0;
};

/// w = (9 nu^6 / 4) x^4 - 3 delta x^2 with analytic w'.
ScalarField mexican_hat_field(const MexicanHatSpec& spec);

/// y(b) / max|y| for the solution with (y, y')(a) = (0, 1).
double shoot_miss(const ScalarField& w, double lambda, double a, double b, const OdeOptions& options = {});

/// Symmetry pair of w - lambda on a fixed domain, as a function of lambda.
using SymmetryFamily = std::function<SymmetryPair(double lambda)>;

/// w - lambda constant, z = 1.
SymmetryFamily constant_family(double value, Interval domain);
/// z = y1^2 + y2^2 from two integrated solutions with unit Wronskian, so c_w = 1.
SymmetryFamily numeric_symmetry_family(ScalarField w, Interval domain, OdeOptions options = {1e-12, 1e-14});
SymmetryPair numeric_symmetry(const ScalarField& w, double lambda, Interval domain,
                              OdeOptions options = {1e-12, 1e-14});
/// Even Lame family n with c0 replaced by c0 - lambda.
SymmetryFamily lame_even_family(int n, double c0, EllipticInvariants inv, Interval domain);

/// y1(a) y2(b) - y1(b) y2(a) with (y1, y2) the Wronskian-normalized pair of family(lambda).
/// Basis-independent, so continuous across elliptic/hyperbolic switches.
/// Throws ZeroSymmetry when z(., lambda) vanishes on [a, b].
double determinant_condition(const SymmetryFamily& family, double lambda, double a, double b,
                             std::size_t grid_samples = 33);

enum class EigenMethod { shooting, determinant, both };

std::string_view to_string(EigenMethod m) noexcept;

struct EigenProblem {
  ScalarField w;
  double a = 0.0;
  double b = 1.0;
  double lambda_min = -1.0;
  double lambda_max = 0.0;
  double scan_density = 400.0;  // nodes per unit lambda
  int scan_nodes = 0;           // overrides scan_density when positive
  EigenMethod method = EigenMethod::shooting;
  SymmetryFamily family;        // for the determinant; defaults to numeric_symmetry_family
  int threads = 1;
  Tolerances tolerances{};
};

struct EigenResult {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;          // shoot_miss at each eigenvalue
  std::vector<std::string> method_flags;  // shoot | det | both | shoot_only | det_only
  EigenMethod method = EigenMethod::shooting;
  std::size_t unclassified_nodes = 0;     // determinant scan nodes skipped for a vanishing symmetry
};

EigenResult solve_eigen(const EigenProblem& problem);

/// Normalized y^2 along the shooting eigenfunction, sampled on `grid`.
/// Throws NotAnEigenvalue when the miss distance exceeds 1e-4.
Grid density_profile(const ScalarField& w, double lambda, double a, double b, const Grid& grid,
                     const OdeOptions& options = {});

/// Sign changes of the shooting solution strictly inside (a, b).
int count_interior_zeros(const ScalarField& w, double lambda, double a, double b, std::size_t samples = 4001,
                         const OdeOptions& options = {});

}  // namespace lamekit

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lamekit {

using ScalarFunction = std::function<double(double)>;

/// Uniform sampling of [x0, x1] with `samples` nodes and a value per node.
struct Grid {
  Grid(double x0, double x1, std::size_t samples);

  double node(std::size_t i) const noexcept;
  double spacing() const noexcept { return (x1 - x0) / static_cast<double>(samples - 1); }
  std::vector<double> nodes() const;

  double x0;
  double x1;
  std::size_t samples;
  std::vector<double> values;
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b]; b < a gives the negated integral.
/// Throws SingularIntegrand after `max_subdivisions` bisections or when f is not finite.
double integrate_adaptive(const ScalarFunction& f, double a, double b, double rtol, int max_subdivisions = 500);

/// F(x) = int_{x0}^{x} f dt at every node of `grid`; x0 must lie inside the grid interval.
Grid cumulative_quadrature(const ScalarFunction& f, double x0, const Grid& grid, double rtol);

}  // namespace lamekit

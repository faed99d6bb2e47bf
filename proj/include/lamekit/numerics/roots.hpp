#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace lamekit {

using ScalarFunction = std::function<double(double)>;

/// Brent's method on a bracket with f(a)*f(b) <= 0; stops once the bracket is narrower than xtol.
double refine_root(const ScalarFunction& f, double a, double b, double fa, double fb, double xtol);

/// Roots of f on [lo, hi]: sample n_scan uniform nodes, refine every sign change,
/// return sorted roots with duplicates inside 10*xtol merged.
std::vector<double> find_roots_scan(const ScalarFunction& f, double lo, double hi, int n_scan, double xtol);

/// Sampled value of a scan; an empty value marks a node where f could not be evaluated.
struct ScanSample {
  double x;
  std::optional<double> value;
};

/// Bracket-and-refine over precomputed samples (sorted by x). Sign changes are only
/// taken between two consecutive valid samples.
std::vector<double> roots_from_samples(const ScalarFunction& f, const std::vector<ScanSample>& samples, double xtol);

/// Sorts and merges roots closer than `window`.
std::vector<double> dedupe_roots(std::vector<double> roots, double window);

}  // namespace lamekit

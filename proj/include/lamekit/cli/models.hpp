#pragma once

#include <functional>
#include <optional>

#include "lamekit/cli/spec_file.hpp"
#include "lamekit/eigen.hpp"
#include "lamekit/symmetry.hpp"

namespace lamekit::cli {

/// What a spec resolves to: the potential, a way to obtain a symmetry pair on a domain,
/// and the lambda-family used by the determinant method.
struct PotentialModel {
  ScalarField w;
  std::function<SymmetryPair(Interval)> pair_on;
  std::function<SymmetryFamily(Interval)> family_on;
  std::optional<Interval> domain_hint;
  /// True when the pair comes from a closed construction rather than integrated solutions.
  bool analytic_symmetry = false;
};

PotentialModel build_model(const PotentialSpec& spec);

}  // namespace lamekit::cli

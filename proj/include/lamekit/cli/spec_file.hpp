#pragma once

// Potential specification documents: one JSON object with a "kind" discriminator.
//
//   {"kind":"constant","value":1}
//   {"kind":"lame_even","n":1,"c0":0.5,"g2":2,"g3":0.1}
//   {"kind":"lame_odd","n":1,"c0":0,"g2":0,"g3":0}
//   {"kind":"lame_general","C":[..],"E":[..],"g2":..,"g3":..,"A":[..],"B":[..]}   (A, B optional)
//   {"kind":"mexican_hat","nu":1,"delta":1}
//   {"kind":"odd_trivial","n":0,"w0":0}
//   {"kind":"hierarchy","base":{..},"c_hat":1,"alpha":[1,0.1,0],"base_point":0.8,
//    "domain":[0.2,1.4],"samples":129}
//
// Every kind accepts an optional "domain":[x0,x1] hint (required for hierarchy).

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lamekit/scalar_field.hpp"

namespace lamekit::cli {

struct PotentialSpec;

struct ConstantKind {
  double value = 0.0;
  bool operator==(const ConstantKind&) const = default;
};

struct LameEvenKind {
  int n = 1;
  double c0 = 0.0, g2 = 0.0, g3 = 0.0;
  bool operator==(const LameEvenKind&) const = default;
};

struct LameOddKind {
  int n = 0;
  double c0 = 0.0, g2 = 0.0, g3 = 0.0;
  bool operator==(const LameOddKind&) const = default;
};

struct LameGeneralKind {
  std::vector<double> C, E;
  std::optional<std::vector<double>> A, B;
  double g2 = 0.0, g3 = 0.0;
  bool operator==(const LameGeneralKind&) const = default;
};

struct MexicanHatKind {
  double nu = 1.0, delta = 1.0;
  bool operator==(const MexicanHatKind&) const = default;
};

struct OddTrivialKind {
  int n = 0;
  double w0 = 0.0;
  bool operator==(const OddTrivialKind&) const = default;
};

struct HierarchyKind {
  std::shared_ptr<const PotentialSpec> base;
  double c_hat = 0.0;
  std::array<double, 3> alpha{1.0, 0.0, 0.0};
  double base_point = 0.0;
  int samples = 129;
  bool operator==(const HierarchyKind& o) const;
};

using SpecBody =
    std::variant<ConstantKind, LameEvenKind, LameOddKind, LameGeneralKind, MexicanHatKind, OddTrivialKind, HierarchyKind>;

struct PotentialSpec {
  SpecBody body;
  std::optional<Interval> domain;

  std::string_view kind() const noexcept;
  bool operator==(const PotentialSpec& o) const;
};

/// Validates the whole document and throws ParseError listing every violation.
PotentialSpec parse_spec(std::string_view text);
PotentialSpec load_spec(const std::string& path);

/// Serialized document; parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const PotentialSpec& spec);

/// Symmetry document for `lame check`: {"A":[..],"B":[..]}.
struct SymmetryPolys {
  std::vector<double> A, B;
};
SymmetryPolys parse_symmetry(std::string_view text);

}  // namespace lamekit::cli

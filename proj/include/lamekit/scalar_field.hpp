#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>

#include "lamekit/numerics/polynomial.hpp"

namespace lamekit {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval line() noexcept { return {}; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool bounded() const noexcept { return lo > -std::numeric_limits<double>::infinity() && hi < std::numeric_limits<double>::infinity(); }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  double length() const noexcept { return hi - lo; }
};

/// Value and derivatives at a point: jet[k] = f^(k)(x), k = 0..3.
using Jet = std::array<double, 4>;

/// A smooth real function known through analytic derivatives up to `order()`.
/// Entries of the jet above the declared order are unspecified (left zero).
/// Copies share the underlying callable.
class ScalarField {
 public:
  using Fn = std::function<Jet(double)>;

  ScalarField() = default;
  ScalarField(Fn fn, int order, Interval domain = Interval::line());

  static ScalarField constant(double c);
  static ScalarField polynomial(const Polynomial& p);

  Jet jet(double x) const { return (*fn_)(x); }
  double value(double x) const { return jet(x)[0]; }
  double derivative(double x, int k) const { return jet(x)[static_cast<std::size_t>(k)]; }
  double operator()(double x) const { return value(x); }

  int order() const noexcept { return order_; }
  const Interval& domain() const noexcept { return domain_; }
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

  /// f + c
  ScalarField shifted(double c) const;
  /// s * f
  ScalarField scaled(double s) const;
  ScalarField with_domain(Interval d) const;

 private:
  std::shared_ptr<const Fn> fn_;
  int order_ = 0;
  Interval domain_;
};

}  // namespace lamekit

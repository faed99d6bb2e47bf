#include "lamekit/scalar_field.hpp"

namespace lamekit {

ScalarField::ScalarField(Fn fn, int order, Interval domain)
    : fn_(std::make_shared<const Fn>(std::move(fn))), order_(order), domain_(domain) {}

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](double) { return Jet{c, 0.0, 0.0, 0.0}; }, 3);
}

ScalarField ScalarField::polynomial(const Polynomial& p) {
  const Polynomial d1 = p.derivative(), d2 = d1.derivative(), d3 = d2.derivative();
  return ScalarField([p, d1, d2, d3](double x) { return Jet{p(x), d1(x), d2(x), d3(x)}; }, 3);
}

ScalarField ScalarField::shifted(double c) const {
  auto fn = fn_;
  return ScalarField(
      [fn, c](double x) {
        Jet j = (*fn)(x);
        j[0] += c;
        return j;
      },
      order_, domain_);
}

ScalarField ScalarField::scaled(double s) const {
  auto fn = fn_;
  return ScalarField(
      [fn, s](double x) {
        Jet j = (*fn)(x);
        for (double& v : j) v *= s;
        return j;
      },
      order_, domain_);
}

ScalarField ScalarField::with_domain(Interval d) const {
  ScalarField out = *this;
  out.domain_ = d;
  return out;
}

}  // namespace lamekit

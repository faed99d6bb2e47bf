#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lamekit {

/// Dense real polynomial, coefficients stored low-to-high (coeffs()[i] multiplies t^i).
/// Trailing exact zeros are trimmed, so the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c);
  /// t^k
  static Polynomial monomial(std::size_t k, double c = 1.0);

  /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  /// Coefficient of t^i, zero beyond the degree.
  double operator[](std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0.0; }

  double operator()(double t) const noexcept;
  Polynomial derivative(unsigned order = 1) const;
  /// p(a*t + b)
  Polynomial compose_affine(double a, double b) const;
  double max_abs_coeff() const noexcept;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator-(Polynomial p) { return p *= -1.0; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Horner evaluation; free-function spelling of Polynomial::operator().
double poly_eval(const Polynomial& p, double t) noexcept;
Polynomial poly_derivative(const Polynomial& p);
Polynomial poly_mul(const Polynomial& p, const Polynomial& q);

/// Evaluates p at every point of `ts` through the runtime-selected kernel backend.
std::vector<double> poly_eval_many(const Polynomial& p, std::span<const double> ts);

}  // namespace lamekit

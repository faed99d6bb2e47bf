#include "lamekit/numerics/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "lamekit/numerics/kernels.hpp"

namespace lamekit {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(double c) { return Polynomial{c}; }

Polynomial Polynomial::monomial(std::size_t k, double c) {
  std::vector<double> v(k + 1, 0.0);
  v[k] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double t) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative(unsigned order) const {
  Polynomial p = *this;
  for (unsigned k = 0; k < order && !p.is_zero(); ++k) {
    std::vector<double> d(p.coeffs_.size() - 1);
    for (std::size_t i = 1; i < p.coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * p.coeffs_[i];
    p = Polynomial(std::move(d));
  }
  return p;
}

Polynomial Polynomial::compose_affine(double a, double b) const {
  // Horner in polynomial arithmetic: acc = acc*(a t + b) + c_i
  Polynomial acc;
  const Polynomial lin{b, a};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + Polynomial{*it};
  return acc;
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::vector<double> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

double poly_eval(const Polynomial& p, double t) noexcept { return p(t); }
Polynomial poly_derivative(const Polynomial& p) { return p.derivative(); }
Polynomial poly_mul(const Polynomial& p, const Polynomial& q) { return p * q; }

std::vector<double> poly_eval_many(const Polynomial& p, std::span<const double> ts) {
  std::vector<double> out(ts.size());
  kernels::horner(p.coeffs(), ts, out);
  return out;
}

}  // namespace lamekit

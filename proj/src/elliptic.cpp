#include "lamekit/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "lamekit/errors.hpp"
#include "lamekit/numerics/kernels.hpp"

namespace lamekit {

namespace {

[[noreturn]] void pole_error(double x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "wp: argument x = " << x << " is too close to a pole";
  throw PoleProximity(msg.str());
}

}  // namespace

bool EllipticInvariants::degenerate() const noexcept {
  const double scale = std::max({1.0, std::abs(g2 * g2 * g2), g3 * g3});
  return std::abs(discriminant()) < 1e-12 * scale;
}

std::vector<double> wp_series_coeffs(const EllipticInvariants& inv, int K) {
  if (K < 3) throw ParseError("wp_series_coeffs requires K >= 3");
  // c[k] for k = 0..K, entries 0 and 1 unused
  std::vector<double> c(static_cast<std::size_t>(K) + 1, 0.0);
  c[2] = inv.g2 / 20.0;
  c[3] = inv.g3 / 28.0;
  for (int k = 4; k <= K; ++k) {
    double acc = 0.0;
    for (int m = 2; m <= k - 2; ++m) acc += c[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(k - m)];
    c[static_cast<std::size_t>(k)] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * acc;
  }
  return {c.begin() + 2, c.end()};
}

WeierstrassEvaluator::WeierstrassEvaluator(EllipticInvariants inv, int truncation_order, double pole_guard)
    : inv_(inv), order_(truncation_order), guard_(pole_guard) {
  const double a2 = std::max(std::abs(inv.g2), 1.0);
  const double a3 = std::max(std::abs(inv.g3), 1.0);
  radius_ = 0.5 * std::min({1.0, std::pow(20.0 / a2, 0.25), std::pow(28.0 / a3, 1.0 / 6.0)});
  series_ = wp_series_coeffs(inv, order_);
  dseries_.resize(series_.size());
  for (std::size_t i = 0; i < series_.size(); ++i) dseries_[i] = (2.0 * static_cast<double>(i + 2) - 2.0) * series_[i];
}

int WeierstrassEvaluator::halvings(double x) const noexcept {
  int j = 0;
  double u = std::abs(x);
  while (u > radius_ && j < 1100) {
    u *= 0.5;
    ++j;
  }
  return j;
}

WpValue WeierstrassEvaluator::series(double x) const { return series(x, order_); }

WpValue WeierstrassEvaluator::series(double x, int truncation_order) const {
  const std::vector<double> c =
      truncation_order == order_ ? series_ : wp_series_coeffs(inv_, truncation_order);
  const double s = x * x;
  double a = 0.0, b = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    a = a * s + c[k];
    b = b * s + (2.0 * static_cast<double>(k + 2) - 2.0) * c[k];
  }
  return {1.0 / s + s * a, -2.0 / (s * x) + x * b};
}

WpValue WeierstrassEvaluator::duplicate(WpValue v) const {
  const double pp = 6.0 * v.p0 * v.p0 - 0.5 * inv_.g2;
  const double ppp = 12.0 * v.p0 * v.p1;
  const double sl = pp / (2.0 * v.p1);
  const double dsl = (ppp * v.p1 - pp * pp) / (2.0 * v.p1 * v.p1);
  return {-2.0 * v.p0 + sl * sl, -v.p1 + sl * dsl};
}

WpValue WeierstrassEvaluator::operator()(double x) const {
  if (inv_.g2 == 0.0 && inv_.g3 == 0.0) {
    const WpValue v{1.0 / (x * x), -2.0 / (x * x * x)};
    if (!(std::abs(v.p0) <= guard_)) pole_error(x);
    return v;
  }
  const int j = halvings(x);
  WpValue v = series(std::ldexp(x, -j));
  if (!(std::abs(v.p0) <= guard_)) pole_error(x);
  for (int i = 0; i < j; ++i) {
    v = duplicate(v);
    if (!(std::abs(v.p0) <= guard_)) pole_error(x);
  }
  return v;
}

std::vector<double> WeierstrassEvaluator::derivatives(double x, int order) const {
  if (order < 0 || order > 4) throw ParseError("wp_derivatives: order must be in 0..4");
  const WpValue v = (*this)(x);
  const double p = v.p0, d = v.p1;
  const double pp = 6.0 * p * p - 0.5 * inv_.g2;
  const double all[5] = {p, d, pp, 12.0 * p * d, 12.0 * d * d + 12.0 * p * pp};
  return {all, all + order + 1};
}

void WeierstrassEvaluator::evaluate_many(std::span<const double> xs, std::span<double> p0, std::span<double> p1) const {
  const std::size_t n = xs.size();
  if (inv_.g2 == 0.0 && inv_.g3 == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const WpValue v = (*this)(xs[i]);
      p0[i] = v.p0;
      p1[i] = v.p1;
    }
    return;
  }
  std::vector<double> u(n);
  std::vector<std::int32_t> dbl(n);
  std::vector<std::uint8_t> pole(n);
  for (std::size_t i = 0; i < n; ++i) {
    dbl[i] = halvings(xs[i]);
    u[i] = std::ldexp(xs[i], -dbl[i]);
  }
  const kernels::WpBatch params{series_, dseries_, inv_.g2, guard_};
  kernels::wp_reduced(params, u, dbl, p0, p1, pole);
  for (std::size_t i = 0; i < n; ++i)
    if (pole[i]) pole_error(xs[i]);
}

WpValue wp(const WeierstrassEvaluator& eval, double x) { return eval(x); }

std::vector<double> wp_derivatives(const WeierstrassEvaluator& eval, double x, int order) {
  return eval.derivatives(x, order);
}

}  // namespace lamekit

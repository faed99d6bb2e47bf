#include "lamekit/numerics/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "lamekit/errors.hpp"

namespace lamekit {

namespace {

// Dormand-Prince 5(4) tableau with the Hairer-Wanner continuous extension.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;

double scaled_norm(std::span<const double> v, std::span<const double> y, const OdeOptions& o) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]) / std::max(o.atol, o.rtol * std::abs(y[i])));
  return m;
}

}  // namespace

std::size_t OdeSolution::locate(double x) const {
  const bool forward = xs_.back() >= xs_.front();
  auto it = forward ? std::upper_bound(xs_.begin(), xs_.end(), x)
                    : std::upper_bound(xs_.begin(), xs_.end(), x, std::greater<>());
  std::size_t k = static_cast<std::size_t>(std::distance(xs_.begin(), it));
  if (k == 0) return 0;
  return std::min(k - 1, steps() - 1);
}

double OdeSolution::interpolate(std::size_t step, double x, std::size_t i) const {
  const double x0 = xs_[step];
  const double h = xs_[step + 1] - x0;
  const double t = (x - x0) / h;
  const double t1 = 1.0 - t;
  const double* rc = dense_.data() + step * 5 * dim_;
  return rc[i] + t * (rc[dim_ + i] + t1 * (rc[2 * dim_ + i] + t * (rc[3 * dim_ + i] + t1 * rc[4 * dim_ + i])));
}

double OdeSolution::component(double x, std::size_t i) const {
  if (steps() == 0) return ys_[i];
  const std::size_t k = locate(x);
  if (x == xs_[k]) return ys_[k * dim_ + i];
  if (x == xs_[k + 1]) return ys_[(k + 1) * dim_ + i];
  return interpolate(k, x, i);
}

State OdeSolution::operator()(double x) const {
  State out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = component(x, i);
  return out;
}

State OdeSolution::state_at_step(std::size_t k) const {
  return State(ys_.begin() + static_cast<std::ptrdiff_t>(k * dim_),
               ys_.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim_));
}

double OdeSolution::max_abs_component(std::size_t i) const {
  double m = std::abs(ys_[i]);
  for (std::size_t k = 0; k < steps(); ++k) {
    m = std::max(m, std::abs(ys_[(k + 1) * dim_ + i]));
    const double h = xs_[k + 1] - xs_[k];
    for (double t : {0.25, 0.5, 0.75}) m = std::max(m, std::abs(interpolate(k, xs_[k] + t * h, i)));
  }
  return m;
}

OdeSolution integrate_ode(const VectorField& f, double x0, std::span<const double> u0, double x1,
                          const OdeOptions& o) {
  OdeSolution sol;
  const std::size_t n = u0.size();
  sol.dim_ = n;
  sol.xs_.push_back(x0);
  sol.ys_.assign(u0.begin(), u0.end());
  if (x1 == x0) return sol;

  const double span = std::abs(x1 - x0);
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double hmin = 1e-14 * span;

  std::vector<double> y(u0.begin(), u0.end()), ynew(n), ytmp(n), err(n);
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.resize(n);

  f(x0, y, k[0]);

  // Initial step (Hairer & Wanner, II.4).
  double h;
  {
    const double dn0 = scaled_norm(y, y, o);
    const double dn1 = scaled_norm(k[0], y, o);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k[0][i];
    f(x0 + dir * h0, ytmp, k[1]);
    for (std::size_t i = 0; i < n; ++i) err[i] = (k[1][i] - k[0][i]) / h0;
    const double dn2 = scaled_norm(err, y, o);
    const double big = std::max(dn1, dn2);
    const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 0.2);
    h = dir * std::min({100.0 * h0, h1, span});
  }

  double x = x0;
  bool last_rejected = false;
  while (dir * (x1 - x) > 0.0) {
    if (sol.xs_.size() > o.max_steps) throw StepSizeUnderflow("integrate_ode: step budget exhausted");
    if (std::abs(h) < hmin) {
      std::ostringstream msg;
      msg << "integrate_ode: step size underflow near x = " << x;
      throw StepSizeUnderflow(msg.str());
    }
    bool final_step = false;
    if (dir * (x + h - x1) >= 0.0) {
      h = x1 - x;
      final_step = true;
    }

    auto stage = [&](std::vector<double>& out, double cx, auto&& combine) {
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * combine(i);
      f(x + cx * h, ytmp, out);
    };
    stage(k[1], c2, [&](std::size_t i) { return a21 * k[0][i]; });
    stage(k[2], c3, [&](std::size_t i) { return a31 * k[0][i] + a32 * k[1][i]; });
    stage(k[3], c4, [&](std::size_t i) { return a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]; });
    stage(k[4], c5,
          [&](std::size_t i) { return a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]; });
    stage(k[5], 1.0, [&](std::size_t i) {
      return a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i];
    });
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
    const double xnew = final_step ? x1 : x + h;
    f(xnew, ynew, k[6]);

    double errn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      const double sc = std::max(o.atol, o.rtol * std::max(std::abs(y[i]), std::abs(ynew[i])));
      errn = std::max(errn, std::abs(e) / sc);
    }
    if (!std::isfinite(errn)) {
      h *= kFacMin;
      last_rejected = true;
      continue;
    }

    double fac = errn == 0.0 ? kFacMax : kSafety * std::pow(errn, -0.2);
    fac = std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
    if (errn > 1.0) {
      h *= std::min(fac, 1.0);
      last_rejected = true;
      continue;
    }

    // accepted: store dense output coefficients
    const std::size_t base = sol.dense_.size();
    sol.dense_.resize(base + 5 * n);
    double* rc = sol.dense_.data() + base;
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k[0][i] - ydiff;
      rc[i] = y[i];
      rc[n + i] = ydiff;
      rc[2 * n + i] = bspl;
      rc[3 * n + i] = ydiff - h * k[6][i] - bspl;
      rc[4 * n + i] =
          h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
    }
    sol.xs_.push_back(xnew);
    sol.ys_.insert(sol.ys_.end(), ynew.begin(), ynew.end());
    sol.errs_.push_back(errn);

    x = xnew;
    y.swap(ynew);
    k[0].swap(k[6]);
    last_rejected = false;
    h *= fac;
  }
  return sol;
}

}  // namespace lamekit

#include "lamekit/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lamekit/errors.hpp"

namespace lamekit {

namespace {

bool below_floor(const Jet& z) { return std::abs(z[0]) < 1e-12 * std::max({1.0, std::abs(z[1]), std::abs(z[2])}); }

[[noreturn]] void zero_symmetry(double x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "symmetry vanishes at x = " << x;
  throw ZeroSymmetry(msg.str());
}

std::vector<double> uniform_nodes(const Interval& d, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = i + 1 == n ? d.hi : d.lo + (d.hi - d.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return xs;
}

// Derivatives (h, h', h'', h''') of an angular profile at theta.
using Profile = std::function<std::array<double, 4>(double)>;

// Jet of theta = kappa * Phi given the jet of z.
std::array<double, 4> theta_jet(double phi, double kappa, const Jet& z) {
  const double zi = 1.0 / z[0];
  return {kappa * phi, kappa * zi, -kappa * z[1] * zi * zi, kappa * (2.0 * z[1] * z[1] * zi * zi * zi - z[2] * zi * zi)};
}

// y = sqrt|z| g(theta), derivatives up to order 2.
ScalarField root_modulated(const ScalarField& z, std::shared_ptr<const Antiderivative> phi, double kappa, Profile g,
                           double factor) {
  return ScalarField(
      [z, phi, kappa, g, factor](double x) {
        const Jet zj = z.jet(x);
        if (below_floor(zj)) zero_symmetry(x);
        const auto th = theta_jet((*phi)(x), kappa, zj);
        const auto gv = g(th[0]);
        const double r = std::sqrt(std::abs(zj[0]));
        const double q = zj[1] / zj[0];
        const double r1 = 0.5 * r * q;
        const double r2 = r * (0.5 * zj[2] / zj[0] - 0.25 * q * q);
        const double y0 = r * gv[0];
        const double y1 = r1 * gv[0] + r * gv[1] * th[1];
        const double y2 = r2 * gv[0] + 2.0 * r1 * gv[1] * th[1] + r * (gv[2] * th[1] * th[1] + gv[1] * th[2]);
        return Jet{factor * y0, factor * y1, factor * y2, 0.0};
      },
      2, z.domain());
}

// z H(theta), derivatives up to order 3.
ScalarField z_modulated(const ScalarField& z, std::shared_ptr<const Antiderivative> phi, double kappa, Profile h,
                        Interval domain) {
  return ScalarField(
      [z, phi, kappa, h](double x) {
        const Jet zj = z.jet(x);
        if (below_floor(zj)) zero_symmetry(x);
        const auto th = theta_jet((*phi)(x), kappa, zj);
        const auto hv = h(th[0]);
        const double H0 = hv[0];
        const double H1 = hv[1] * th[1];
        const double H2 = hv[2] * th[1] * th[1] + hv[1] * th[2];
        const double H3 = hv[3] * th[1] * th[1] * th[1] + 3.0 * hv[2] * th[1] * th[2] + hv[1] * th[3];
        return Jet{zj[0] * H0, zj[1] * H0 + zj[0] * H1, zj[2] * H0 + 2.0 * zj[1] * H1 + zj[0] * H2,
                   zj[3] * H0 + 3.0 * zj[2] * H1 + 3.0 * zj[1] * H2 + zj[0] * H3};
      },
      3, domain);
}

std::array<double, 4> sin_d(double t) { return {std::sin(t), std::cos(t), -std::sin(t), -std::cos(t)}; }
std::array<double, 4> cos_d(double t) { return {std::cos(t), -std::sin(t), -std::cos(t), std::sin(t)}; }
std::array<double, 4> sinh_d(double t) { return {std::sinh(t), std::cosh(t), std::sinh(t), std::cosh(t)}; }
std::array<double, 4> cosh_d(double t) { return {std::cosh(t), std::sinh(t), std::cosh(t), std::sinh(t)}; }
std::array<double, 4> lin_d(double t) { return {t, 1.0, 0.0, 0.0}; }
std::array<double, 4> sq_d(double t) { return {t * t, 2.0 * t, 2.0, 0.0}; }
std::array<double, 4> one_d(double) { return {1.0, 0.0, 0.0, 0.0}; }

// The two non-trivial profiles of the symmetry triple and the angular rate kappa.
struct TripleProfiles {
  Profile second;
  Profile third;
  double kappa;
};

TripleProfiles triple_profiles(const SymmetryPair& pair) {
  switch (pair.symmetry_case()) {
    case SymmetryCase::elliptic:
      return {sin_d, cos_d, 2.0 * pair.q0()};
    case SymmetryCase::hyperbolic:
      return {sinh_d, cosh_d, 2.0 * pair.q0()};
    case SymmetryCase::parabolic:
      break;
  }
  return {sq_d, lin_d, 1.0};
}

std::shared_ptr<const Antiderivative> reciprocal_primitive(const ScalarField& z, double x_b, const Grid& grid,
                                                           double rtol) {
  if (x_b < grid.x0 || x_b > grid.x1) throw ParseError("base point outside the grid interval");
  require_nonvanishing(z, grid);
  return std::make_shared<const Antiderivative>([z](double x) { return 1.0 / z.value(x); }, x_b, grid, rtol);
}

}  // namespace

std::string_view to_string(SymmetryCase c) noexcept {
  switch (c) {
    case SymmetryCase::elliptic:
      return "elliptic";
    case SymmetryCase::hyperbolic:
      return "hyperbolic";
    case SymmetryCase::parabolic:
      return "parabolic";
  }
  return "unknown";
}

double lie_residual(const ScalarField& w, const ScalarField& z, double x) {
  const Jet wj = w.jet(x);
  const Jet zj = z.jet(x);
  return zj[3] + 4.0 * wj[0] * zj[1] + 2.0 * wj[1] * zj[0];
}

double lie_scale(const ScalarField& w, const ScalarField& z, double x) {
  const Jet wj = w.jet(x);
  const Jet zj = z.jet(x);
  return std::max({std::abs(zj[3]), std::abs(4.0 * wj[0] * zj[1]), std::abs(2.0 * wj[1] * zj[0])});
}

ScalarField potential_from_symmetry(const ScalarField& z, double c_w) {
  return ScalarField(
      [z, c_w](double x) {
        const Jet zj = z.jet(x);
        if (below_floor(zj)) zero_symmetry(x);
        const double zi = 1.0 / zj[0];
        const double q = zj[1] * zi;
        const double w = c_w * zi * zi + 0.25 * q * q - 0.5 * zj[2] * zi;
        const double dw = -2.0 * c_w * zj[1] * zi * zi * zi + 0.5 * q * (zj[2] * zi - q * q) - 0.5 * zj[3] * zi +
                          0.5 * zj[2] * zj[1] * zi * zi;
        return Jet{w, dw, 0.0, 0.0};
      },
      1, z.domain());
}

double cw_at(const ScalarField& w, const ScalarField& z, double x) {
  const double wv = w.value(x);
  const Jet zj = z.jet(x);
  return wv * zj[0] * zj[0] - 0.25 * zj[1] * zj[1] + 0.5 * zj[0] * zj[2];
}

CwEstimate compute_cw(const ScalarField& w, const ScalarField& z, std::span<const double> xs) {
  if (xs.empty()) throw ParseError("compute_cw needs at least one node");
  std::vector<double> vals;
  vals.reserve(xs.size());
  for (double x : xs) {
    if (below_floor(z.jet(x))) zero_symmetry(x);
    vals.push_back(cw_at(w, z, x));
  }
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  double dev = 0.0;
  for (double v : vals) dev = std::max(dev, std::abs(v - median));
  return {median, dev};
}

SymmetryCase classify_case(double c_w, double scale) {
  if (!(scale > 0.0)) throw ParseError("classify_case requires a positive scale");
  if (c_w > kClassificationTolerance * scale) return SymmetryCase::elliptic;
  if (c_w < -kClassificationTolerance * scale) return SymmetryCase::hyperbolic;
  return SymmetryCase::parabolic;
}

SymmetryPair::SymmetryPair(ScalarField w, ScalarField z, Interval domain, double c_w, double scale)
    : w_(std::move(w)), z_(std::move(z)), domain_(domain), c_w_(c_w), scale_(scale) {
  case_ = classify_case(c_w_, scale_);
  q0_ = case_ == SymmetryCase::parabolic ? 0.0 : std::sqrt(std::abs(c_w_));
}

SymmetryPair SymmetryPair::build(ScalarField w, ScalarField z, Interval domain, std::size_t nodes) {
  if (!domain.bounded() || !(domain.lo < domain.hi)) throw ParseError("symmetry pair needs a bounded domain");
  const auto xs = uniform_nodes(domain, std::max<std::size_t>(nodes, 2));
  const CwEstimate est = compute_cw(w, z, xs);
  double scale = 1.0;
  for (double x : xs) {
    const double zv = z.value(x);
    scale = std::max(scale, std::abs(w.value(x)) * zv * zv);
  }
  return SymmetryPair(std::move(w), std::move(z), domain, est.c_w, scale);
}

PairDiagnostics check_pair(const SymmetryPair& pair, std::size_t nodes, double lie_tol, double cw_tol) {
  PairDiagnostics d;
  const auto xs = uniform_nodes(pair.domain(), std::max<std::size_t>(nodes, 2));
  for (double x : xs) {
    const double res = lie_residual(pair.w(), pair.z(), x);
    const double sc = lie_scale(pair.w(), pair.z(), x);
    const double rel = sc > 0.0 ? std::abs(res) / sc : std::abs(res);
    d.max_relative_lie_residual = std::max(d.max_relative_lie_residual, rel);
  }
  const CwEstimate est = compute_cw(pair.w(), pair.z(), xs);
  d.c_w = est.c_w;
  d.cw_deviation = est.max_deviation;
  d.lie_ok = d.max_relative_lie_residual <= lie_tol;
  d.cw_ok = d.cw_deviation <= cw_tol * (1.0 + std::abs(est.c_w));
  return d;
}

Antiderivative::Antiderivative(ScalarFunction f, double x_b, const Grid& grid, double rtol)
    : f_(std::move(f)), x_b_(x_b), rtol_(rtol), table_(cumulative_quadrature(f_, x_b, grid, rtol)) {}

double Antiderivative::operator()(double x) const {
  const double hs = table_.spacing();
  const double pos = std::clamp((x - table_.x0) / hs, 0.0, static_cast<double>(table_.samples - 1));
  const auto k = static_cast<std::size_t>(std::llround(pos));
  const double node = table_.node(k);
  if (x == node) return table_.values[k];
  return table_.values[k] + integrate_adaptive(f_, node, x, rtol_);
}

void require_nonvanishing(const ScalarField& z, const Grid& grid) {
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.samples; ++i) {
    const double x = grid.node(i);
    const Jet zj = z.jet(x);
    if (below_floor(zj) || !std::isfinite(zj[0])) zero_symmetry(x);
    if (i > 0 && (prev > 0.0) != (zj[0] > 0.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "symmetry changes sign between x = " << grid.node(i - 1) << " and x = " << x;
      throw ZeroSymmetry(msg.str());
    }
    prev = zj[0];
  }
}

FundamentalPair::FundamentalPair(ScalarField y1, ScalarField y2, std::shared_ptr<const Antiderivative> phi,
                                 SymmetryCase c, double q0, double scale)
    : y1_(std::move(y1)), y2_(std::move(y2)), phi_(std::move(phi)), case_(c), q0_(q0), scale_(scale) {}

double FundamentalPair::wronskian(double x) const {
  const Jet a = y1_.jet(x);
  const Jet b = y2_.jet(x);
  return a[0] * b[1] - a[1] * b[0];
}

FundamentalPair FundamentalPair::normalized() const {
  const double w0 = wronskian(phi_->base_point());
  if (!(std::abs(w0) > 0.0)) throw ZeroSymmetry("degenerate fundamental pair (zero Wronskian)");
  const double f = 1.0 / std::sqrt(std::abs(w0));
  const double s1 = w0 > 0.0 ? -f : f;
  return FundamentalPair(y1_.scaled(s1), y2_.scaled(f), phi_, case_, q0_, scale_ * f);
}

FundamentalPair fundamental_solutions(const SymmetryPair& pair, double x_b, const Grid& grid, double rtol) {
  auto phi = reciprocal_primitive(pair.z(), x_b, grid, rtol);
  const Interval dom{grid.x0, grid.x1};
  const ScalarField z = pair.z().with_domain(dom);
  switch (pair.symmetry_case()) {
    case SymmetryCase::elliptic:
      return {root_modulated(z, phi, pair.q0(), sin_d, 1.0), root_modulated(z, phi, pair.q0(), cos_d, 1.0), phi,
              SymmetryCase::elliptic, pair.q0(), 1.0};
    case SymmetryCase::hyperbolic:
      return {root_modulated(z, phi, pair.q0(), sinh_d, 1.0), root_modulated(z, phi, pair.q0(), cosh_d, 1.0), phi,
              SymmetryCase::hyperbolic, pair.q0(), 1.0};
    case SymmetryCase::parabolic:
      break;
  }
  return {root_modulated(z, phi, 1.0, lin_d, 1.0), root_modulated(z, phi, 1.0, one_d, 1.0), phi,
          SymmetryCase::parabolic, 0.0, 1.0};
}

SymmetryTriple symmetry_triple(const SymmetryPair& pair, double x_b, const Grid& grid, double rtol) {
  auto phi = reciprocal_primitive(pair.z(), x_b, grid, rtol);
  const Interval dom{grid.x0, grid.x1};
  const TripleProfiles tp = triple_profiles(pair);
  return {pair.z().with_domain(dom), z_modulated(pair.z(), phi, tp.kappa, tp.second, dom),
          z_modulated(pair.z(), phi, tp.kappa, tp.third, dom)};
}

LinearSymmetry LinearSymmetry::u0() { return {ScalarField::constant(1.0), ScalarField::constant(0.0)}; }
LinearSymmetry LinearSymmetry::u1() { return {ScalarField::constant(0.0), ScalarField::constant(1.0)}; }

LinearSymmetry LinearSymmetry::from_symmetry(const ScalarField& z) {
  ScalarField a(
      [z](double x) {
        const Jet j = z.jet(x);
        return Jet{-0.5 * j[1], -0.5 * j[2], -0.5 * j[3], 0.0};
      },
      2, z.domain());
  return {std::move(a), z};
}

double first_integral(const LinearSymmetry& phi1, const LinearSymmetry& phi2, const ScalarField& w,
                      const ScalarField& y, double x) {
  const Jet yj = y.jet(x);
  const double u0 = yj[0], u1 = yj[1];
  const double wv = w.value(x);
  auto phi = [&](const LinearSymmetry& s) {
    const Jet a = s.a.jet(x), b = s.b.jet(x);
    const double v = a[0] * u0 + b[0] * u1;
    const double dv = a[1] * u0 + (a[0] + b[1]) * u1 - b[0] * wv * u0;
    return std::pair{v, dv};
  };
  const auto [v1, d1] = phi(phi1);
  const auto [v2, d2] = phi(phi2);
  return v1 * d2 - v2 * d1;
}

double sl2_bracket(const ScalarField& z1, const ScalarField& z2, double x) {
  const Jet a = z1.jet(x), b = z2.jet(x);
  return a[1] * b[0] - a[0] * b[1];
}

SymmetryPair hierarchy_step(const SymmetryPair& pair, double c_hat, const std::array<double, 3>& alpha, double x_b,
                            const Grid& grid, double rtol) {
  auto phi = reciprocal_primitive(pair.z(), x_b, grid, rtol);
  const Interval dom{grid.x0, grid.x1};
  const TripleProfiles tp = triple_profiles(pair);
  const auto [a1, a2, a3] = alpha;
  Profile combo = [tp, a1, a2, a3](double t) {
    const auto s = tp.second(t);
    const auto c = tp.third(t);
    std::array<double, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) out[k] = a2 * s[k] + a3 * c[k];
    out[0] += a1;
    return out;
  };
  const ScalarField z_hat = z_modulated(pair.z(), phi, tp.kappa, combo, dom);
  require_nonvanishing(z_hat, grid);
  const ScalarField w = pair.w();
  ScalarField w_hat(
      [w, z_hat, c_hat](double x) {
        const Jet wj = w.jet(x);
        const Jet zj = z_hat.jet(x);
        const double zi = 1.0 / zj[0];
        return Jet{wj[0] + c_hat * zi * zi, wj[1] - 2.0 * c_hat * zj[1] * zi * zi * zi, 0.0, 0.0};
      },
      1, dom);
  return SymmetryPair::build(std::move(w_hat), z_hat, dom);
}

}  // namespace lamekit

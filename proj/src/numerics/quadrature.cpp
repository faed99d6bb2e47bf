#include "lamekit/numerics/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "lamekit/errors.hpp"

namespace lamekit {

namespace {

// Gauss-Kronrod 7/15 abscissae (positive half) and weights.
constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double gauss;
  double abs_kronrod;
};

Panel gk15(const ScalarFunction& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kWk[7] * fc;
  double g = kWg[3] * fc;
  double ak = kWk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[static_cast<std::size_t>(j)];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    k += kWk[static_cast<std::size_t>(j)] * (f1 + f2);
    ak += kWk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  const Panel p{k * h, g * h, ak * std::abs(h)};
  if (!std::isfinite(p.kronrod)) {
    std::ostringstream msg;
    msg << "integrand not finite on [" << a << ", " << b << "]";
    throw SingularIntegrand(msg.str());
  }
  return p;
}

}  // namespace

Grid::Grid(double x0_, double x1_, std::size_t samples_) : x0(x0_), x1(x1_), samples(samples_), values(samples_, 0.0) {
  if (!(x0 < x1)) throw ParseError("grid requires x0 < x1");
  if (samples < 2) throw ParseError("grid requires at least two samples");
}

double Grid::node(std::size_t i) const noexcept {
  if (i + 1 == samples) return x1;
  return x0 + spacing() * static_cast<double>(i);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(samples);
  for (std::size_t i = 0; i < samples; ++i) out[i] = node(i);
  return out;
}

double integrate_adaptive(const ScalarFunction& f, double a, double b, double rtol, int max_subdivisions) {
  if (a == b) return 0.0;
  // Global subdivision: always bisect the panel with the largest error estimate.
  struct Piece {
    double err;
    double lo;
    double hi;
    Panel p;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  std::priority_queue<Piece> heap;
  double total = 0.0, err = 0.0, mass = 0.0;
  const auto push = [&](double lo, double hi) {
    const Panel p = gk15(f, lo, hi);
    const Piece piece{std::abs(p.kronrod - p.gauss), lo, hi, p};
    total += p.kronrod;
    err += piece.err;
    mass += p.abs_kronrod;
    heap.push(piece);
  };
  push(a, b);
  for (int split = 0;; ++split) {
    if (err <= std::max(rtol * std::max(mass, std::abs(total)), 1e-300)) return total;
    const Piece worst = heap.top();
    const double m = 0.5 * (worst.lo + worst.hi);
    if (split >= max_subdivisions || !(worst.lo < m && m < worst.hi)) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge near x = " << m;
      throw SingularIntegrand(msg.str());
    }
    heap.pop();
    total -= worst.p.kronrod;
    err -= worst.err;
    mass -= worst.p.abs_kronrod;
    push(worst.lo, m);
    push(m, worst.hi);
  }
}

Grid cumulative_quadrature(const ScalarFunction& f, double x0, const Grid& grid, double rtol) {
  if (x0 < grid.x0 || x0 > grid.x1) throw ParseError("cumulative_quadrature: base point outside grid interval");
  Grid out = grid;
  const double hs = grid.spacing();
  auto k0 = static_cast<std::size_t>(std::llround((x0 - grid.x0) / hs));
  if (k0 >= grid.samples) k0 = grid.samples - 1;
  out.values[k0] = integrate_adaptive(f, x0, grid.node(k0), rtol);
  for (std::size_t k = k0 + 1; k < grid.samples; ++k)
    out.values[k] = out.values[k - 1] + integrate_adaptive(f, grid.node(k - 1), grid.node(k), rtol);
  for (std::size_t k = k0; k-- > 0;)
    out.values[k] = out.values[k + 1] - integrate_adaptive(f, grid.node(k), grid.node(k + 1), rtol);
  return out;
}

}  // namespace lamekit

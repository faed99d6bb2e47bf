#include "lamekit/lame.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lamekit/errors.hpp"

namespace lamekit {

namespace {

Polynomial d(const Polynomial& p, unsigned k = 1) { return p.derivative(k); }

double scale_of(std::initializer_list<Polynomial> terms) {
  double s = 0.0;
  for (const auto& t : terms) s = std::max(s, t.max_abs_coeff());
  return s;
}

// Elements P(p0) + p1 Q(p0) of the coordinate ring of the curve.
struct CurveElement {
  Polynomial even;
  Polynomial odd;
};

struct CurveRing {
  Polynomial f;  // 4p^3 - g2 p - g3
  Polynomial h;  // p1' = 6p^2 - g2/2

  explicit CurveRing(const EllipticInvariants& inv)
      : f{-inv.g3, -inv.g2, 0.0, 4.0}, h{-0.5 * inv.g2, 0.0, 6.0} {}

  CurveElement dx(const CurveElement& u) const { return {d(u.odd) * f + u.odd * h, d(u.even)}; }

  CurveElement mul(const CurveElement& u, const CurveElement& v) const {
    return {u.even * v.even + f * (u.odd * v.odd), u.even * v.odd + u.odd * v.even};
  }
};

CurveElement add(CurveElement u, const CurveElement& v) {
  u.even += v.even;
  u.odd += v.odd;
  return u;
}

CurveElement scale(CurveElement u, double s) {
  u.even *= s;
  u.odd *= s;
  return u;
}

}  // namespace

ReducedLieEquation r1_r2_polynomials(const LamePotentialSpec& pot, const LameSymmetrySpec& sym) {
  const double g2 = pot.invariants.g2;
  const double g3 = pot.invariants.g3;
  const Polynomial& A = sym.A;
  const Polynomial& B = sym.B;
  const Polynomial& C = pot.C;
  const Polynomial& E = pot.E;

  const Polynomial f{-g3, -g2, 0.0, 4.0};
  const Polynomial fp{-g2, 0.0, 12.0};
  const Polynomial p{0.0, 1.0};

  // R1
  const Polynomial r1_a = f * f * d(B, 3);
  const Polynomial r1_b = 3.0 * f * fp * d(B, 2);
  const Polynomial r1_c = (4.0 * f * C + Polynomial{0.75 * g2 * g2, -48.0 * g3, -66.0 * g2, 0.0, 300.0}) * d(B);
  const Polynomial r1_d = 2.0 * B * (fp * C + Polynomial{-6.0 * g3, -9.0 * g2, 0.0, 60.0});
  const Polynomial r1_e = E * A * fp;
  const Polynomial r1_f = 2.0 * (2.0 * E * d(A) + B * d(C) + A * d(E)) * f;

  // R2
  const Polynomial r2_a = f * d(A, 3);
  const Polynomial r2_b = Polynomial{-1.5 * g2, 0.0, 18.0} * d(A, 2);
  const Polynomial r2_c = 4.0 * (C + 3.0 * p) * d(A);
  const Polynomial r2_d = 2.0 * f * (B * d(E) + 2.0 * E * d(B));
  const Polynomial r2_e = 2.0 * A * d(C);
  const Polynomial r2_f = 3.0 * B * E * fp;

  ReducedLieEquation out;
  out.R1 = r1_a + r1_b + r1_c + r1_d + r1_e + r1_f;
  out.R2 = r2_a + r2_b + r2_c + r2_d + r2_e + r2_f;
  out.scale = scale_of({r1_a, r1_b, r1_c, r1_d, r1_e, r1_f, r2_a, r2_b, r2_c, r2_d, r2_e, r2_f});
  return out;
}

ReducedLieEquation reduce_lie_equation(const LamePotentialSpec& pot, const LameSymmetrySpec& sym) {
  const CurveRing ring(pot.invariants);
  const CurveElement w{pot.C, pot.E};
  const CurveElement z{sym.A, sym.B};
  const CurveElement z1 = ring.dx(z);
  const CurveElement z3 = ring.dx(ring.dx(z1));
  const CurveElement t2 = scale(ring.mul(w, z1), 4.0);
  const CurveElement t3 = scale(ring.mul(ring.dx(w), z), 2.0);
  const CurveElement lie = add(add(z3, t2), t3);
  return {lie.even, lie.odd,
          scale_of({z3.even, z3.odd, t2.even, t2.odd, t3.even, t3.odd})};
}

EvenFamily even_coefficients(int n, double c0, const EllipticInvariants& inv) {
  if (n < 1) throw UnsupportedN("even family needs n >= 1, got " + std::to_string(n));
  const double g2 = inv.g2;
  const double g3 = inv.g3;
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  const auto at = [&](int j) { return (j >= 0 && j <= n) ? a[static_cast<std::size_t>(j)] : 0.0; };
  const double N = n;

  a[static_cast<std::size_t>(n)] = 1.0;
  a[static_cast<std::size_t>(n - 1)] = c0 / (2.0 * N - 1.0);
  if (n >= 2) {
    const double m = 2.0 * N - 1.0;
    a[static_cast<std::size_t>(n - 2)] =
        (8.0 * c0 * c0 - N * g2 * m * m) * (N - 1.0) / (8.0 * (2.0 * N - 3.0) * m * m);
  }
  for (int i = n - 3; i >= 0; --i) {
    const double I = i;
    const double num = ((2.0 * I * I + 10.0 * I + 12.0) * at(i + 3) * g3 +
                        (2.0 * I * I + 7.0 * I + 6.0) * at(i + 2) * g2 - 8.0 * c0 * at(i + 1)) *
                       (I + 1.0);
    a[static_cast<std::size_t>(i)] = num / (4.0 * (I + N + 1.0) * (2.0 * I + 1.0) * (I - N));
  }
  return {n, c0, inv, -N * (N + 1.0), std::move(a)};
}

double even_cw_closed_form(int n, double c0, const EllipticInvariants& inv) {
  const double g2 = inv.g2;
  const double g3 = inv.g3;
  switch (n) {
    case 1:
      return c0 * c0 * c0 - (c0 * g2 - g3) / 4.0;
    case 2:
      return (c0 * c0 - 3.0 * g2) * (4.0 * c0 * c0 * c0 - 9.0 * c0 * g2 - 27.0 * g3) / 324.0;
    case 3: {
      const double c2 = c0 * c0;
      const double c3 = c2 * c0;
      const double c4 = c2 * c2;
      return c4 * c3 / 50625.0 - 7.0 * g2 * c4 * c0 / 11250.0 - 11.0 * g3 * c4 / 3750.0 +
             31.0 * g2 * g2 * c3 / 6000.0 + 9.0 * g2 * g3 * c2 / 200.0 + (27.0 * g3 * g3 - g2 * g2 * g2) * c0 / 240.0;
    }
    default:
      throw UnsupportedN("closed-form c_w is known for n = 1, 2, 3 only, got " + std::to_string(n));
  }
}

Polynomial even_cw_polynomial(const EvenFamily& fam) {
  const CurveRing ring(fam.invariants);
  const CurveElement w{fam.C(), {}};
  const CurveElement z{fam.A(), {}};
  const CurveElement z1 = ring.dx(z);
  const CurveElement z2 = ring.dx(z1);
  const CurveElement cw =
      add(add(ring.mul(w, ring.mul(z, z)), scale(ring.mul(z1, z1), -0.25)), scale(ring.mul(z, z2), 0.5));
  return cw.even;
}

namespace {

double odd_b(const OddFamily& fam, int j) {
  return (j >= 0 && j <= fam.n) ? fam.b[static_cast<std::size_t>(j)] : 0.0;
}

// Terms of row i, indexed by the offset k in b_{i+k}, k = -3..3.
std::array<double, 7> odd_row_terms(const OddFamily& fam, int i) {
  const double I = i;
  const double c0 = fam.c0;
  const double c1 = fam.c1;
  const double g2 = fam.invariants.g2;
  const double g3 = fam.invariants.g3;
  return {
      4.0 * (I - 1.0) * (4.0 * c1 + 4.0 * I * I - 8.0 * I + 3.0) * odd_b(fam, i - 3),
      8.0 * c0 * (2.0 * I - 1.0) * odd_b(fam, i - 2),
      -2.0 * g2 * I * (2.0 * c1 + 4.0 * I * I + 5.0) * odd_b(fam, i - 1),
      -2.0 * (2.0 * I + 1.0) * (c0 * g2 + c1 * g3 + 2.0 * g3 * I * I + 2.0 * g3 * I + 6.0 * g3) * odd_b(fam, i),
      (I + 1.0) * (4.0 * g2 * g2 * I * I + 8.0 * g2 * g2 * I + 3.0 * g2 * g2 - 16.0 * c0 * g3) / 4.0 *
          odd_b(fam, i + 1),
      g2 * g3 * (I + 1.0) * (I + 2.0) * (2.0 * I + 3.0) * odd_b(fam, i + 2),
      g3 * g3 * (I + 1.0) * (I + 2.0) * (I + 3.0) * odd_b(fam, i + 3),
  };
}

}  // namespace

OddFamily odd_coefficients(int n, double c0, const EllipticInvariants& inv) {
  if (n < 0) throw UnsupportedN("odd family needs n >= 0, got " + std::to_string(n));
  const double N = n;
  OddFamily fam{n, c0, inv, -3.75 - N * (N + 4.0), std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
  fam.b[static_cast<std::size_t>(n)] = 1.0;
  for (int i = n + 2; i >= 3; --i) {
    const double I = i;
    const double pivot = 4.0 * (I - 1.0) * (4.0 * fam.c1 + 4.0 * I * I - 8.0 * I + 3.0);
    if (pivot == 0.0) {
      throw RecurrenceBreakdown("odd recurrence: coefficient of b_" + std::to_string(i - 3) + " vanishes at i = " +
                                std::to_string(i));
    }
    const auto terms = odd_row_terms(fam, i);  // b_{i-3} still zero here
    double rest = 0.0;
    for (std::size_t k = 1; k < terms.size(); ++k) rest += terms[k];
    fam.b[static_cast<std::size_t>(i - 3)] = -rest / pivot;
  }
  return fam;
}

double odd_row(const OddFamily& fam, int i) {
  double s = 0.0;
  for (double t : odd_row_terms(fam, i)) s += t;
  return s;
}

std::array<double, 3> gc_residuals(const OddFamily& fam) {
  return {odd_row(fam, 0), odd_row(fam, 1), odd_row(fam, 2)};
}

std::array<double, 3> gc_term_scale(const OddFamily& fam) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    for (double t : odd_row_terms(fam, i)) out[static_cast<std::size_t>(i)] = std::max(out[static_cast<std::size_t>(i)], std::abs(t));
  }
  return out;
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 gc_at(int n, const Vec3& v) {
  return gc_residuals(odd_coefficients(n, v[0], {v[1], v[2]}));
}

double norm2(const Vec3& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

double weighted_size(const Vec3& v) {
  return std::abs(v[0]) + std::sqrt(std::abs(v[1])) + std::cbrt(std::abs(v[2]));
}

double relative_residual(int n, const Vec3& v, Vec3* residuals) {
  const OddFamily fam = odd_coefficients(n, v[0], {v[1], v[2]});
  const Vec3 r = gc_residuals(fam);
  const Vec3 s = gc_term_scale(fam);
  if (residuals) *residuals = r;
  double rel = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (r[i] == 0.0) continue;
    rel = std::max(rel, s[i] > 0.0 ? std::abs(r[i]) / s[i] : HUGE_VAL);
  }
  return rel;
}

// Gaussian elimination with partial pivoting; false when singular.
bool solve3(std::array<Vec3, 3> m, Vec3 rhs, Vec3& x) {
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0 || !std::isfinite(m[piv][c])) return false;
    std::swap(m[c], m[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = c + 1; r < 3; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < 3; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (std::size_t c = 3; c-- > 0;) {
    double s = rhs[c];
    for (std::size_t k = c + 1; k < 3; ++k) s -= m[c][k] * x[k];
    x[c] = s / m[c][c];
  }
  return true;
}

}  // namespace

std::vector<GcRoot> search_gc_roots(int n, int starts_per_axis, double box) {
  std::vector<GcRoot> roots;
  const int k = std::max(starts_per_axis, 1);
  const auto node = [&](int j) { return k == 1 ? 0.0 : -box + 2.0 * box * j / (k - 1); };

  for (int i0 = 0; i0 < k; ++i0) {
    for (int i1 = 0; i1 < k; ++i1) {
      for (int i2 = 0; i2 < k; ++i2) {
        Vec3 v{node(i0), node(i1), node(i2)};
        Vec3 r = gc_at(n, v);
        for (int iter = 0; iter < 80; ++iter) {
          std::array<Vec3, 3> jac{};
          for (std::size_t c = 0; c < 3; ++c) {
            Vec3 vp = v;
            const double h = 1e-7 * std::max(1.0, std::abs(v[c]));
            vp[c] += h;
            const Vec3 rp = gc_at(n, vp);
            for (std::size_t row = 0; row < 3; ++row) jac[row][c] = (rp[row] - r[row]) / h;
          }
          Vec3 step{};
          if (!solve3(jac, {-r[0], -r[1], -r[2]}, step)) break;
          double t = 1.0;
          const double r0 = norm2(r);
          bool moved = false;
          for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
            const Vec3 cand{v[0] + t * step[0], v[1] + t * step[1], v[2] + t * step[2]};
            const Vec3 rc = gc_at(n, cand);
            if (std::isfinite(norm2(rc)) && norm2(rc) < r0) {
              v = cand;
              r = rc;
              moved = true;
              break;
            }
          }
          if (!moved || norm2(step) * t < 1e-15 * (1.0 + norm2(v))) break;
        }
        if (weighted_size(v) <= 1e-3) continue;
        Vec3 res{};
        const double rel = relative_residual(n, v, &res);
        if (!(rel < 1e-9)) continue;
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](const GcRoot& g) {
          return std::abs(g.c0 - v[0]) + std::abs(g.g2 - v[1]) + std::abs(g.g3 - v[2]) < 1e-6 * (1.0 + norm2(v));
        });
        if (!dup) roots.push_back({v[0], v[1], v[2], res, rel});
      }
    }
  }
  return roots;
}

ScalarField OddTrivialPair::solution(double alpha1, double alpha2) const {
  const double a = -1.5 - n;
  const double b = n + 2.5;
  const double shift = w0;
  return ScalarField(
      [=](double x) {
        const double u = x + shift;
        const double ua = std::pow(u, a);
        const double ub = std::pow(u, b);
        return Jet{alpha1 * ua + alpha2 * ub, (alpha1 * a * ua + alpha2 * b * ub) / u,
                   (alpha1 * a * (a - 1.0) * ua + alpha2 * b * (b - 1.0) * ub) / (u * u), 0.0};
      },
      2);
}

SymmetryPair OddTrivialPair::on(Interval domain) const {
  double scale = 1.0;
  for (int k = 0; k <= 16; ++k) {
    const double x = domain.lo + domain.length() * k / 16.0;
    const double zx = z(x);
    scale = std::max(scale, std::abs(w(x)) * zx * zx);
  }
  return SymmetryPair(w.with_domain(domain), z.with_domain(domain), domain, 0.0, scale);
}

OddTrivialPair odd_trivial_pair(int n, double w0) {
  if (n < 0) throw UnsupportedN("odd trivial pair needs n >= 0, got " + std::to_string(n));
  const double c1 = -3.75 - n * (n + 4.0);
  const double m = -2.0 * n - 3.0;
  ScalarField w(
      [=](double x) {
        const double u = x + w0;
        return Jet{c1 / (u * u), -2.0 * c1 / (u * u * u), 0.0, 0.0};
      },
      1);
  ScalarField z(
      [=](double x) {
        const double u = x + w0;
        const double um = std::pow(u, m);
        return Jet{-2.0 * um, -2.0 * m * um / u, -2.0 * m * (m - 1.0) * um / (u * u),
                   -2.0 * m * (m - 1.0) * (m - 2.0) * um / (u * u * u)};
      },
      3);
  return {n, w0, c1, std::move(w), std::move(z)};
}

namespace {

// Jet of F(wp(x)) from the wp jet P = (wp, wp', wp'', wp''').
Jet compose_jet(const Polynomial& F, const double* P) {
  const double f0 = F(P[0]);
  const double f1 = F.derivative(1)(P[0]);
  const double f2 = F.derivative(2)(P[0]);
  const double f3 = F.derivative(3)(P[0]);
  return {f0, f1 * P[1], f2 * P[1] * P[1] + f1 * P[2],
          f3 * P[1] * P[1] * P[1] + 3.0 * f2 * P[1] * P[2] + f1 * P[3]};
}

}  // namespace

ScalarField lame_potential_field(const LamePotentialSpec& pot, const WeierstrassEvaluator& eval) {
  const Polynomial C = pot.C;
  const Polynomial E = pot.E;
  const Polynomial dC = C.derivative();
  const Polynomial dE = E.derivative();
  return ScalarField(
      [=](double x) {
        const std::vector<double> p = eval.derivatives(x, 2);
        const double e = E(p[0]);
        return Jet{C(p[0]) + p[1] * e, dC(p[0]) * p[1] + p[2] * e + p[1] * p[1] * dE(p[0]), 0.0, 0.0};
      },
      1);
}

ScalarField lame_symmetry_field(const LameSymmetrySpec& sym, const WeierstrassEvaluator& eval) {
  const Polynomial A = sym.A;
  const Polynomial B = sym.B;
  return ScalarField(
      [=](double x) {
        const std::vector<double> p = eval.derivatives(x, 4);
        const Jet a = compose_jet(A, p.data());
        if (B.is_zero()) return a;
        const Jet b = compose_jet(B, p.data());
        const double* q = p.data() + 1;  // jet of wp'
        return Jet{a[0] + q[0] * b[0], a[1] + q[1] * b[0] + q[0] * b[1],
                   a[2] + q[2] * b[0] + 2.0 * q[1] * b[1] + q[0] * b[2],
                   a[3] + q[3] * b[0] + 3.0 * q[2] * b[1] + 3.0 * q[1] * b[2] + q[0] * b[3]};
      },
      3);
}

SymmetryPair assemble_fields(const LamePotentialSpec& pot, const LameSymmetrySpec& sym,
                             const WeierstrassEvaluator& eval, Interval domain) {
  return SymmetryPair::build(lame_potential_field(pot, eval).with_domain(domain),
                             lame_symmetry_field(sym, eval).with_domain(domain), domain);
}

}  // namespace lamekit

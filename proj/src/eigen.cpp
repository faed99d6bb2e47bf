#include "lamekit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <optional>
#include <thread>

#include "lamekit/errors.hpp"
#include "lamekit/lame.hpp"
#include "lamekit/numerics/roots.hpp"

namespace lamekit {

ScalarField mexican_hat_field(const MexicanHatSpec& spec) {
  if (!(spec.nu > 0.0) || !(spec.delta > 0.0)) throw ParseError("mexican hat needs nu > 0 and delta > 0");
  const double k4 = 9.0 * std::pow(spec.nu, 6) / 4.0;
  const double k2 = 3.0 * spec.delta;
  return ScalarField(
      [=](double x) {
        const double x2 = x * x;
        return Jet{(k4 * x2 - k2) * x2, (4.0 * k4 * x2 - 2.0 * k2) * x, 12.0 * k4 * x2 - 2.0 * k2, 24.0 * k4 * x};
      },
      3);
}

namespace {

OdeSolution shoot(const ScalarField& w, double lambda, double a, double b, const OdeOptions& options) {
  const VectorField f = [&](double x, std::span<const double> u, std::span<double> du) {
    du[0] = u[1];
    du[1] = -(w(x) - lambda) * u[0];
  };
  const double u0[2] = {0.0, 1.0};
  return integrate_ode(f, a, u0, b, options);
}

}  // namespace

double shoot_miss(const ScalarField& w, double lambda, double a, double b, const OdeOptions& options) {
  const OdeSolution sol = shoot(w, lambda, a, b, options);
  return sol.final_state()[0] / sol.max_abs_component(0);
}

SymmetryFamily constant_family(double value, Interval domain) {
  return [=](double lambda) {
    const double v = value - lambda;
    return SymmetryPair(ScalarField::constant(v).with_domain(domain), ScalarField::constant(1.0).with_domain(domain),
                        domain, v, std::max(1.0, std::abs(v)));
  };
}

SymmetryPair numeric_symmetry(const ScalarField& w, double lambda, Interval domain, OdeOptions options) {
  const ScalarField v = w.shifted(-lambda);
  const double xm = domain.midpoint();
  const VectorField f = [v](double x, std::span<const double> u, std::span<double> du) {
    const double q = v(x);
    du[0] = u[1];
    du[1] = -q * u[0];
    du[2] = u[3];
    du[3] = -q * u[2];
  };
  // y1 = (0, 1), y2 = (1, 0) at the midpoint: Wronskian -1, so c_w = W^2 = 1.
  const double u0[4] = {0.0, 1.0, 1.0, 0.0};
  auto left = std::make_shared<const OdeSolution>(integrate_ode(f, xm, u0, domain.lo, options));
  auto right = std::make_shared<const OdeSolution>(integrate_ode(f, xm, u0, domain.hi, options));
  ScalarField z(
      [v, left, right, xm](double x) {
        const State u = x < xm ? (*left)(x) : (*right)(x);
        const Jet vj = v.jet(x);
        const double y1 = u[0], d1 = u[1], y2 = u[2], d2 = u[3];
        const double z0 = y1 * y1 + y2 * y2;
        const double z1 = 2.0 * (y1 * d1 + y2 * d2);
        const double z2 = 2.0 * (d1 * d1 + d2 * d2) - 2.0 * vj[0] * z0;
        const double z3 = -4.0 * vj[0] * z1 - 2.0 * vj[1] * z0;
        return Jet{z0, z1, z2, z3};
      },
      3, domain);
  return SymmetryPair::build(v.with_domain(domain), z, domain);
}

SymmetryFamily numeric_symmetry_family(ScalarField w, Interval domain, OdeOptions options) {
  return [w = std::move(w), domain, options](double lambda) { return numeric_symmetry(w, lambda, domain, options); };
}

SymmetryFamily lame_even_family(int n, double c0, EllipticInvariants inv, Interval domain) {
  auto eval = std::make_shared<const WeierstrassEvaluator>(inv);
  return [=](double lambda) {
    const EvenFamily fam = even_coefficients(n, c0 - lambda, inv);
    return assemble_fields(fam.potential(), fam.symmetry(), *eval, domain);
  };
}

double determinant_condition(const SymmetryFamily& family, double lambda, double a, double b,
                             std::size_t grid_samples) {
  const SymmetryPair pair = family(lambda);
  const Grid grid(a, b, grid_samples);
  const FundamentalPair fp = fundamental_solutions(pair, 0.5 * (a + b), grid).normalized();
  return fp.y1()(a) * fp.y2()(b) - fp.y1()(b) * fp.y2()(a);
}

std::string_view to_string(EigenMethod m) noexcept {
  switch (m) {
    case EigenMethod::shooting: return "shoot";
    case EigenMethod::determinant: return "det";
    case EigenMethod::both: return "both";
  }
  return "?";
}

namespace {

// Evaluates f at every node, possibly on several threads. Nodes where f throws a
// lamekit::Error are left empty.
std::vector<ScanSample> sample(const ScalarFunction& f, double lo, double hi, int nodes, int threads) {
  std::vector<ScanSample> out(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) out[static_cast<std::size_t>(i)].x = lo + (hi - lo) * i / (nodes - 1);
  const auto work = [&](int first, int stride) {
    for (int i = first; i < nodes; i += stride) {
      auto& s = out[static_cast<std::size_t>(i)];
      try {
        const double v = f(s.x);
        if (std::isfinite(v)) s.value = v;
      } catch (const Error&) {
      }
    }
  };
  const int t = std::clamp(threads, 1, std::max(1, nodes));
  if (t == 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k) {
    pool.emplace_back([&, k] {
      try {
        work(k, t);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> bracket_and_refine(const ScalarFunction& f, const std::vector<ScanSample>& s, double xtol) {
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (!s[i].value || !s[i + 1].value) continue;
    const double fa = *s[i].value;
    const double fb = *s[i + 1].value;
    if (fa == 0.0) {
      roots.push_back(s[i].x);
      continue;
    }
    if (fa * fb > 0.0 || fb == 0.0) continue;
    try {
      roots.push_back(refine_root(f, s[i].x, s[i + 1].x, fa, fb, xtol));
    } catch (const Error&) {
    }
  }
  if (!s.empty() && s.back().value && *s.back().value == 0.0) roots.push_back(s.back().x);
  return dedupe_roots(std::move(roots), 10.0 * xtol);
}

}  // namespace

EigenResult solve_eigen(const EigenProblem& p) {
  if (!(p.a < p.b)) throw ParseError("eigen problem needs a < b");
  if (!(p.lambda_min < p.lambda_max)) throw ParseError("eigen problem needs lambda_min < lambda_max");
  if (!p.w) throw ParseError("eigen problem has no potential");
  const double width = p.lambda_max - p.lambda_min;
  const int nodes = p.scan_nodes > 0 ? std::max(2, p.scan_nodes)
                                     : std::max(2, static_cast<int>(std::ceil(p.scan_density * width)) + 1);
  const double xtol = p.tolerances.xtol * std::max({1.0, std::abs(p.lambda_min), std::abs(p.lambda_max)});
  const OdeOptions ode{p.tolerances.rtol, p.tolerances.atol};

  const ScalarFunction miss = [&](double lambda) { return shoot_miss(p.w, lambda, p.a, p.b, ode); };

  EigenResult result;
  result.method = p.method;

  std::vector<double> shoot_roots;
  std::vector<double> det_roots;
  if (p.method != EigenMethod::determinant) {
    shoot_roots = bracket_and_refine(miss, sample(miss, p.lambda_min, p.lambda_max, nodes, p.threads), xtol);
  }
  if (p.method != EigenMethod::shooting) {
    const SymmetryFamily family =
        p.family ? p.family : numeric_symmetry_family(p.w, Interval{p.a, p.b});
    const ScalarFunction det = [&](double lambda) { return determinant_condition(family, lambda, p.a, p.b); };
    const auto samples = sample(det, p.lambda_min, p.lambda_max, nodes, p.threads);
    result.unclassified_nodes = static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const ScanSample& s) { return !s.value; }));
    det_roots = bracket_and_refine(det, samples, xtol);
  }

  struct Row {
    double lambda;
    std::string flag;
  };
  std::vector<Row> rows;
  if (p.method == EigenMethod::shooting) {
    for (double r : shoot_roots) rows.push_back({r, "shoot"});
  } else if (p.method == EigenMethod::determinant) {
    for (double r : det_roots) rows.push_back({r, "det"});
  } else {
    std::vector<bool> used(shoot_roots.size(), false);
    for (double d : det_roots) {
      std::optional<std::size_t> match;
      for (std::size_t k = 0; k < shoot_roots.size(); ++k) {
        if (!used[k] && std::abs(shoot_roots[k] - d) <= 1e-6 * (1.0 + std::abs(d))) {
          match = k;
          break;
        }
      }
      if (match) {
        used[*match] = true;
        rows.push_back({shoot_roots[*match], "both"});
      } else {
        rows.push_back({d, "det_only"});
      }
    }
    for (std::size_t k = 0; k < shoot_roots.size(); ++k)
      if (!used[k]) rows.push_back({shoot_roots[k], "shoot_only"});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.lambda < y.lambda; });
  for (const auto& r : rows) {
    result.eigenvalues.push_back(r.lambda);
    result.residuals.push_back(miss(r.lambda));
    result.method_flags.push_back(r.flag);
  }
  return result;
}

Grid density_profile(const ScalarField& w, double lambda, double a, double b, const Grid& grid,
                     const OdeOptions& options) {
  const OdeSolution sol = shoot(w, lambda, a, b, options);
  const double m = sol.final_state()[0] / sol.max_abs_component(0);
  if (!(std::abs(m) <= 1e-4)) {
    throw NotAnEigenvalue("lambda = " + std::to_string(lambda) + " is not an eigenvalue (miss " + std::to_string(m) +
                          ")");
  }
  const auto sq = [&](double x) {
    const double y = sol.component(x, 0);
    return y * y;
  };
  const double mass = integrate_adaptive(sq, a, b, 1e-12);
  Grid out = grid;
  out.values.resize(out.samples);
  for (std::size_t i = 0; i < out.samples; ++i) out.values[i] = sq(out.node(i)) / mass;
  return out;
}

int count_interior_zeros(const ScalarField& w, double lambda, double a, double b, std::size_t samples,
                         const OdeOptions& options) {
  const OdeSolution sol = shoot(w, lambda, a, b, options);
  const double floor = 1e-6 * sol.max_abs_component(0);
  int zeros = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i + 1 < samples; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double y = sol.component(x, 0);
    if (std::abs(y) < floor) continue;
    const int s = y > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++zeros;
    last_sign = s;
  }
  return zeros;
}

}  // namespace lamekit

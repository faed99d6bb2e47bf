#include "lamekit/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lamekit/errors.hpp"

namespace lamekit {

double refine_root(const ScalarFunction& f, double a, double b, double fa, double fb, double xtol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.25 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // secant or inverse quadratic step
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

std::vector<double> dedupe_roots(std::vector<double> roots, double window) {
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || r - out.back() > window) out.push_back(r);
  return out;
}

std::vector<double> roots_from_samples(const ScalarFunction& f, const std::vector<ScanSample>& samples, double xtol) {
  std::vector<double> roots;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.value && *s.value == 0.0) roots.push_back(s.x);
    if (i + 1 == samples.size()) break;
    const auto& t = samples[i + 1];
    if (!s.value || !t.value) continue;
    const double fa = *s.value, fb = *t.value;
    if (fa == 0.0 || fb == 0.0) continue;
    if ((fa < 0.0) != (fb < 0.0)) roots.push_back(refine_root(f, s.x, t.x, fa, fb, xtol));
  }
  return dedupe_roots(std::move(roots), 10.0 * xtol);
}

std::vector<double> find_roots_scan(const ScalarFunction& f, double lo, double hi, int n_scan, double xtol) {
  if (!(lo < hi) || n_scan < 2) throw ParseError("find_roots_scan requires lo < hi and n_scan >= 2");
  std::vector<ScanSample> samples(static_cast<std::size_t>(n_scan));
  const double h = (hi - lo) / (n_scan - 1);
  for (int i = 0; i < n_scan; ++i) {
    const double x = i + 1 == n_scan ? hi : lo + h * i;
    samples[static_cast<std::size_t>(i)] = {x, f(x)};
  }
  return roots_from_samples(f, samples, xtol);
}

}  // namespace lamekit

// Reference implementations. Every SIMD variant must agree with these to
// rounding (FMA contraction is the only expected source of difference).

#include <cmath>

#include "lamekit/numerics/kernels.hpp"

namespace lamekit::kernels::detail {

void horner_scalar(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) {
  const std::size_t n = coeffs.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = n; k-- > 0;) acc = acc * x[i] + coeffs[k];
    out[i] = acc;
  }
}

void wp_reduced_scalar(const WpBatch& params, std::span<const double> u, std::span<const std::int32_t> doublings,
                       std::span<double> p0, std::span<double> p1, std::span<std::uint8_t> pole) {
  const std::size_t ns = params.series.size();
  const double half_g2 = 0.5 * params.g2;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i];
    const double s = x * x;
    double a = 0.0;
    double b = 0.0;
    for (std::size_t k = ns; k-- > 0;) {
      a = a * s + params.series[k];
      b = b * s + params.dseries[k];
    }
    double p = 1.0 / s + s * a;
    double d = -2.0 / (s * x) + x * b;
    bool hit = !(std::abs(p) <= params.pole_guard);
    for (std::int32_t j = 0; j < doublings[i]; ++j) {
      const double pp = 6.0 * p * p - half_g2;  // wp''
      const double ppp = 12.0 * p * d;          // wp'''
      const double sl = pp / (2.0 * d);
      const double dsl = (ppp * d - pp * pp) / (2.0 * d * d);
      p = -2.0 * p + sl * sl;
      d = -d + sl * dsl;
      hit = hit || !(std::abs(p) <= params.pole_guard);
    }
    p0[i] = p;
    p1[i] = d;
    pole[i] = hit ? 1 : 0;
  }
}

}  // namespace lamekit::kernels::detail

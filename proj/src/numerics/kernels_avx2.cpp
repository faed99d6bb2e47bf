// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached after a
// runtime CPU check in kernels.cpp.

#include <immintrin.h>

#include <algorithm>

#include "lamekit/numerics/kernels.hpp"

namespace lamekit::kernels::detail {

void horner_avx2(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) {
  const std::size_t n = coeffs.size();
  const std::size_t m = x.size();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = n; k-- > 0;) acc = _mm256_fmadd_pd(acc, xv, _mm256_set1_pd(coeffs[k]));
    _mm256_storeu_pd(out.data() + i, acc);
  }
  if (i < m) horner_scalar(coeffs, x.subspan(i), out.subspan(i));
}

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

}  // namespace

void wp_reduced_avx2(const WpBatch& params, std::span<const double> u, std::span<const std::int32_t> doublings,
                     std::span<double> p0, std::span<double> p1, std::span<std::uint8_t> pole) {
  const std::size_t ns = params.series.size();
  const std::size_t m = u.size();
  const __m256d half_g2 = _mm256_set1_pd(0.5 * params.g2);
  const __m256d guard = _mm256_set1_pd(params.pole_guard);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d six = _mm256_set1_pd(6.0);
  const __m256d twelve = _mm256_set1_pd(12.0);

  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d x = _mm256_loadu_pd(u.data() + i);
    const __m256d s = _mm256_mul_pd(x, x);
    __m256d a = _mm256_setzero_pd();
    __m256d b = _mm256_setzero_pd();
    for (std::size_t k = ns; k-- > 0;) {
      a = _mm256_fmadd_pd(a, s, _mm256_set1_pd(params.series[k]));
      b = _mm256_fmadd_pd(b, s, _mm256_set1_pd(params.dseries[k]));
    }
    __m256d p = _mm256_fmadd_pd(s, a, _mm256_div_pd(one, s));
    __m256d d = _mm256_fmadd_pd(x, b, _mm256_div_pd(_mm256_set1_pd(-2.0), _mm256_mul_pd(s, x)));
    // !(|p| <= guard) also catches NaN
    __m256d hit = _mm256_cmp_pd(abs_pd(p), guard, _CMP_NLE_UQ);

    const __m128i cnt32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(doublings.data() + i));
    const __m256d cnt = _mm256_cvtepi32_pd(cnt32);
    const std::int32_t jmax = *std::max_element(doublings.begin() + static_cast<std::ptrdiff_t>(i),
                                                doublings.begin() + static_cast<std::ptrdiff_t>(i + 4));
    for (std::int32_t j = 0; j < jmax; ++j) {
      const __m256d active = _mm256_cmp_pd(_mm256_set1_pd(static_cast<double>(j)), cnt, _CMP_LT_OQ);
      const __m256d pp = _mm256_fmsub_pd(_mm256_mul_pd(six, p), p, half_g2);
      const __m256d ppp = _mm256_mul_pd(_mm256_mul_pd(twelve, p), d);
      const __m256d sl = _mm256_div_pd(pp, _mm256_mul_pd(two, d));
      const __m256d dsl = _mm256_div_pd(_mm256_fmsub_pd(ppp, d, _mm256_mul_pd(pp, pp)),
                                        _mm256_mul_pd(two, _mm256_mul_pd(d, d)));
      const __m256d pn = _mm256_fmsub_pd(sl, sl, _mm256_mul_pd(two, p));
      const __m256d dn = _mm256_fmsub_pd(sl, dsl, d);
      p = _mm256_blendv_pd(p, pn, active);
      d = _mm256_blendv_pd(d, dn, active);
      hit = _mm256_or_pd(hit, _mm256_and_pd(active, _mm256_cmp_pd(abs_pd(p), guard, _CMP_NLE_UQ)));
    }
    _mm256_storeu_pd(p0.data() + i, p);
    _mm256_storeu_pd(p1.data() + i, d);
    const int mask = _mm256_movemask_pd(hit);
    for (int l = 0; l < 4; ++l) pole[i + static_cast<std::size_t>(l)] = (mask >> l) & 1;
  }
  if (i < m)
    wp_reduced_scalar(params, u.subspan(i), doublings.subspan(i), p0.subspan(i), p1.subspan(i), pole.subspan(i));
}

}  // namespace lamekit::kernels::detail

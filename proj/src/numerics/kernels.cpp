#include "lamekit/numerics/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <string>

namespace lamekit::kernels {

namespace {

Backend detect() noexcept {
  Backend best = Backend::scalar;
  if (available(Backend::avx2)) best = Backend::avx2;
  if (const char* env = std::getenv("LAME_KIT_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && available(Backend::avx2)) return Backend::avx2;
  }
  return best;
}

}  // namespace

bool available(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(LAMEKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() noexcept {
  static const Backend backend = detect();
  return backend;
}

std::string_view name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out, Backend backend) {
  assert(out.size() >= x.size());
#if defined(LAMEKIT_HAVE_AVX2)
  if (backend == Backend::avx2 && available(Backend::avx2)) return detail::horner_avx2(coeffs, x, out);
#endif
  (void)backend;
  detail::horner_scalar(coeffs, x, out);
}

void wp_reduced(const WpBatch& params, std::span<const double> u, std::span<const std::int32_t> doublings,
                std::span<double> p0, std::span<double> p1, std::span<std::uint8_t> pole, Backend backend) {
  assert(doublings.size() == u.size() && p0.size() >= u.size() && p1.size() >= u.size() && pole.size() >= u.size());
#if defined(LAMEKIT_HAVE_AVX2)
  if (backend == Backend::avx2 && available(Backend::avx2))
    return detail::wp_reduced_avx2(params, u, doublings, p0, p1, pole);
#endif
  (void)backend;
  detail::wp_reduced_scalar(params, u, doublings, p0, p1, pole);
}

}  // namespace lamekit::kernels

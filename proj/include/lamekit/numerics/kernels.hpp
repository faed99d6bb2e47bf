#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// ISA-specific variants. The variant is picked once at runtime from CPU
// features; LAME_KIT_SIMD=scalar|avx2 forces a choice (falling back to
// scalar when the requested one is unavailable).

#include <cstdint>
#include <span>
#include <string_view>

namespace lamekit::kernels {

enum class Backend { scalar, avx2 };

bool available(Backend b) noexcept;
Backend active_backend() noexcept;
std::string_view name(Backend b) noexcept;

/// out[i] = sum_k coeffs[k] * x[i]^k
void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out,
            Backend backend = active_backend());

/// Laurent series of wp on reduced arguments followed by per-lane duplication.
///
/// `series[k]` is the coefficient of u^(2k+2) in wp(u) - u^-2 and `dseries[k]`
/// the matching coefficient for wp'(u) + 2u^-3 divided by u. Lane i starts at
/// u[i] and is doubled `doublings[i]` times. `pole[i]` is set to 1 when |wp|
/// exceeds `pole_guard` anywhere along the chain.
struct WpBatch {
  std::span<const double> series;
  std::span<const double> dseries;
  double g2 = 0.0;
  double pole_guard = 1e8;
};

void wp_reduced(const WpBatch& params, std::span<const double> u, std::span<const std::int32_t> doublings,
                std::span<double> p0, std::span<double> p1, std::span<std::uint8_t> pole,
                Backend backend = active_backend());

namespace detail {
void horner_scalar(std::span<const double>, std::span<const double>, std::span<double>);
void wp_reduced_scalar(const WpBatch&, std::span<const double>, std::span<const std::int32_t>, std::span<double>,
                       std::span<double>, std::span<std::uint8_t>);
#if defined(LAMEKIT_HAVE_AVX2)
void horner_avx2(std::span<const double>, std::span<const double>, std::span<double>);
void wp_reduced_avx2(const WpBatch&, std::span<const double>, std::span<const std::int32_t>, std::span<double>,
                     std::span<double>, std::span<std::uint8_t>);
#endif
}  // namespace detail

}  // namespace lamekit::kernels

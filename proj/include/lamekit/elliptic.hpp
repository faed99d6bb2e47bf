#pragma once

#include <span>
#include <vector>

namespace lamekit {

/// Invariants of the curve p1^2 = 4 p0^3 - g2 p0 - g3.
struct EllipticInvariants {
  double g2 = 0.0;
  double g3 = 0.0;

  double discriminant() const noexcept { return g2 * g2 * g2 - 27.0 * g3 * g3; }
  bool degenerate() const noexcept;
  /// 4t^3 - g2 t - g3
  double cubic(double t) const noexcept { return (4.0 * t * t - g2) * t - g3; }
};

struct WpValue {
  double p0;  // wp(x)
  double p1;  // wp'(x)
};

/// c_2 .. c_K of wp(x) = x^-2 + sum_{k>=2} c_k x^(2k-2). Requires K >= 3.
std::vector<double> wp_series_coeffs(const EllipticInvariants& inv, int K);

/// Real-argument Weierstrass wp by argument halving, Laurent series and duplication.
///
/// The argument is halved until it lies inside the series radius, the series is
/// summed there, and the duplication formula is applied back up the chain. wp'
/// is carried through each doubling by differentiating the duplication formula,
/// so its sign needs no separate bookkeeping. g2 = g3 = 0 evaluates x^-2 directly.
class WeierstrassEvaluator {
 public:
  explicit WeierstrassEvaluator(EllipticInvariants inv, int truncation_order = 12, double pole_guard = 1e8);

  const EllipticInvariants& invariants() const noexcept { return inv_; }
  int truncation_order() const noexcept { return order_; }
  double series_radius() const noexcept { return radius_; }
  double pole_guard() const noexcept { return guard_; }

  /// Throws PoleProximity when |wp| exceeds the pole guard along the reconstruction.
  WpValue operator()(double x) const;
  /// [wp, wp', wp'', wp''', wp''''] truncated at `order` (0..4).
  std::vector<double> derivatives(double x, int order) const;

  /// Batched evaluation through the SIMD kernel layer; throws PoleProximity
  /// naming the first offending abscissa.
  void evaluate_many(std::span<const double> xs, std::span<double> p0, std::span<double> p1) const;

  /// Truncated Laurent series at x, no reduction. Meaningful for |x| <= series_radius().
  WpValue series(double x) const;
  /// Same, with an explicit truncation order (tail checks).
  WpValue series(double x, int truncation_order) const;
  /// Values at 2u from values at u.
  WpValue duplicate(WpValue at_u) const;
  /// Number of halvings the evaluator uses for x.
  int halvings(double x) const noexcept;

 private:
  EllipticInvariants inv_;
  int order_;
  double guard_;
  double radius_;
  std::vector<double> series_;   // c_2 .. c_K
  std::vector<double> dseries_;  // (2k-2) c_k
};

WpValue wp(const WeierstrassEvaluator& eval, double x);
std::vector<double> wp_derivatives(const WeierstrassEvaluator& eval, double x, int order);

}  // namespace lamekit

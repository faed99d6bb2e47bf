#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lamekit {

using State = std::vector<double>;

/// du/dx = F(x, u), written into `du`.
using VectorField = std::function<void(double x, std::span<const double> u, std::span<double> du)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 2'000'000;
};

/// Dense-output trajectory of a Dormand-Prince 5(4) run. Evaluation anywhere
/// inside [x_begin, x_end] (either orientation) uses the continuous extension
/// of the step that contains x; stored step endpoints are returned verbatim.
class OdeSolution {
 public:
  double x_begin() const noexcept { return xs_.front(); }
  double x_end() const noexcept { return xs_.back(); }
  std::size_t dimension() const noexcept { return dim_; }
  std::size_t steps() const noexcept { return xs_.size() - 1; }

  State operator()(double x) const;
  double component(double x, std::size_t i) const;
  State state_at_step(std::size_t k) const;
  State final_state() const { return state_at_step(steps()); }

  /// Step endpoints x_0 .. x_steps.
  std::span<const double> step_points() const noexcept { return xs_; }
  /// Scaled local error estimate of each accepted step (<= 1 by construction).
  std::span<const double> error_estimates() const noexcept { return errs_; }

  /// max over the trajectory of |u_i|, sampled at step ends and three interior points per step.
  double max_abs_component(std::size_t i) const;

 private:
  friend OdeSolution integrate_ode(const VectorField&, double, std::span<const double>, double, const OdeOptions&);

  std::size_t locate(double x) const;
  double interpolate(std::size_t step, double x, std::size_t i) const;

  std::size_t dim_ = 0;
  std::vector<double> xs_;
  std::vector<double> ys_;     // (steps+1) x dim
  std::vector<double> dense_;  // steps x 5 x dim
  std::vector<double> errs_;
};

/// Adaptive embedded RK 5(4) with dense output. Integrates backwards when x1 < x0.
/// Throws StepSizeUnderflow when the controller asks for |h| < 1e-14 |x1 - x0|.
OdeSolution integrate_ode(const VectorField& f, double x0, std::span<const double> u0, double x1,
                          const OdeOptions& options = {});

}  // namespace lamekit

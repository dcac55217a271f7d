#pragma once

// Dormand-Prince 5(4) with the standard continuous extension (Hairer,
// Norsett & Wanner, contd5).

#include <array>
#include <functional>
#include <vector>

namespace fkdv {

constexpr int kOdeDim = 5;
using OdeState = std::array<double, kOdeDim>;
using OdeRhs = std::function<OdeState(double w, const OdeState& y)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double overflow = 1e8;   ///< stop once |y[0]| exceeds this
  double h_init = 0.0;     ///< 0 picks a starting step automatically
  int max_steps = 200000;
};

class Trajectory {
 public:
  double start() const { return w0_; }
  double end() const { return w_.back(); }
  /// True when integration stopped at the overflow guard before the target.
  bool truncated() const { return truncated_; }
  int steps() const { return static_cast<int>(w_.size()) - 1; }
  int rejected() const { return rejected_; }

  /// Dense-output state at w, which must lie between start() and end().
  OdeState operator()(double w) const;

  const std::vector<double>& nodes() const { return w_; }

 private:
  friend Trajectory integrate_dopri5(const OdeRhs&, double, double, const OdeState&, const OdeOptions&);
  double w0_ = 0.0;
  bool truncated_ = false;
  int rejected_ = 0;
  std::vector<double> w_;  ///< step end points, w_[0] = w0
  std::vector<double> h_;  ///< step sizes (signed)
  std::vector<std::array<OdeState, 5>> coef_;  ///< continuous-extension coefficients per step
  OdeState y0_{};
};

/// Integrates y' = f(w, y) from w0 to w1 (either direction). Throws
/// ConvergenceError on step-size underflow or when max_steps is exhausted,
/// DomainError when f returns a non-finite value.
Trajectory integrate_dopri5(const OdeRhs& f, double w0, double w1, const OdeState& y0,
                            const OdeOptions& options = {});

}  // namespace fkdv

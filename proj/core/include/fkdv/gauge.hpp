#pragma once

// Equations u_t + u^n u_x + alpha(t) u + beta(t) u_xxxxx = 0 and the point
// transformations between them:
//
//   t~ = T(t),  x~ = delta1 x + delta2,  u~ = (delta1 / T_t)^{1/n} u,
//   alpha~ = alpha / T_t + T_tt / (n T_t^2),  beta~ = delta1^5 beta / T_t,
//
// with delta1 T_t > 0 on the working interval.

#include <string>

#include "fkdv/function.hpp"
#include "fkdv/taylor.hpp"
#include "fkdv/time_map.hpp"

namespace fkdv {

struct EquationSpec {
  double n = 2.0;
  Function alpha;
  Function beta = Function(1.0);
  Interval interval{1.0, 2.0};

  /// Validated construction: n not in {0, 1}, bounded nonempty interval,
  /// beta of one strict sign at the sample points.
  static EquationSpec make(double n, Function alpha, Function beta, Interval interval);

  void validate() const;
  /// Sign of beta on the interval (+1 or -1).
  int beta_sign() const;
};

class EquivTransform {
 public:
  EquivTransform() = default;
  EquivTransform(TimeMap time, double delta1, double delta2);

  static EquivTransform identity() { return {}; }
  /// t~ = delta3 t + delta4, x~ = delta1 x + delta2 (the alpha = 0 subgroup).
  static EquivTransform restricted(double delta1, double delta2, double delta3, double delta4);

  const TimeMap& time() const { return time_; }
  double delta1() const { return delta1_; }
  double delta2() const { return delta2_; }

  double x_map(double x) const { return delta1_ * x + delta2_; }
  double x_inverse(double x) const { return (x - delta2_) / delta1_; }

  /// U(t) = (delta1 / T_t)^{1/n}, as a jet in t.
  Taylor u_factor_jet(double t, double n, int order) const;
  double u_factor(double t, double n) const { return u_factor_jet(t, n, 0).value(); }

  /// Throws InvariantError unless delta1 T_t > 0 at sample points of `interval`.
  void check_on(const Interval& interval) const;

  bool is_identity() const { return time_.is_identity() && delta1_ == 1.0 && delta2_ == 0.0; }
  std::string describe() const;

 private:
  TimeMap time_;
  double delta1_ = 1.0;
  double delta2_ = 0.0;
};

EquationSpec apply_equiv(const EquivTransform& g, const EquationSpec& e);

/// g2 after g1.
EquivTransform compose(const EquivTransform& g2, const EquivTransform& g1);
EquivTransform invert(const EquivTransform& g);

struct GaugeResult {
  EquivTransform transform;
  EquationSpec gauged;
};

/// Maps e to an equation with alpha = 0 via
/// t~ = int e^{-n int alpha}, u~ = e^{int alpha} u, antiderivatives based at
/// the left end of the interval.
GaugeResult gauge_to_zero_alpha(const EquationSpec& e);

/// T(t) = int_{t0}^t e^{-n A(s)} ds with A = int_{t0}^s alpha. Closed form for
/// constant alpha, quadrature-backed otherwise.
TimeMap gauge_time_map(const Function& alpha, double n, Interval window);

/// The inverse construction: the equation on `window` with the given alpha
/// whose gauge is `gauged`, i.e. beta(t) = T_t beta~(T(t)).
EquationSpec attach_alpha(const EquationSpec& gauged, const Function& alpha, Interval window);

/// max over samples of |n (alpha/beta)_t - (1/beta)_tt| / (1 + |(1/beta)_tt|).
/// Zero exactly when e is equivalent to a constant-coefficient equation.
double reducibility_residual(const EquationSpec& e, int samples = 64);

struct Constantization {
  EquivTransform transform;
  double A = 0.0;  ///< constant alpha of the image
  double B = 1.0;  ///< constant beta of the image (sign of beta)
  double criterion_residual = 0.0;
  double alpha_spread = 0.0;  ///< max |alpha~ - A| on the image interval
  double beta_spread = 0.0;   ///< max |beta~ - B|
  EquationSpec image;
};

/// Transform with T_t = beta / B taking e to constant coefficients. Throws
/// InvariantError when the reducibility residual exceeds tol.
Constantization constantize(const EquationSpec& e, double tol = 1e-8);

}  // namespace fkdv

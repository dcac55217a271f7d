#pragma once

#include <memory>
#include <string>

#include "fkdv/expr.hpp"
#include "fkdv/function.hpp"
#include "fkdv/taylor.hpp"

namespace fkdv {

/// A strictly monotone smooth map t -> T(t) with its inverse.
///
/// Catalog maps (affine, exponential, power, logarithmic) carry closed-form
/// inverses. Maps built from an arbitrary expression or from an integral are
/// inverted by safeguarded Newton iteration inside a bracket.
class TimeMap {
 public:
  /// The identity map.
  TimeMap();

  static TimeMap identity() { return {}; }
  /// a t + b, a != 0.
  static TimeMap affine(double a, double b);
  /// c exp(k t) + d, c k != 0.
  static TimeMap exponential(double c, double k, double d);
  /// c t^p + d on t > 0, c p != 0.
  static TimeMap power(double c, double p, double d);
  /// c ln(t) + d on t > 0, c != 0.
  static TimeMap logarithmic(double c, double d);
  /// Any monotone expression; the inverse is found numerically.
  static TimeMap from_expr(Expr forward, Interval domain = Interval::whole());
  /// T(t) = integral of `rate` from t0 to t; rate must keep one sign on domain.
  static TimeMap integral(Function rate, double t0, Interval domain);

  double operator()(double t) const;
  Taylor jet(double t, int order) const;
  double inverse(double s) const;
  Taylor inverse_jet(double s, int order) const;

  Interval domain() const;
  /// Image of a subinterval of the domain, ordered.
  Interval image(const Interval& interval) const;

  /// Closed forms when available, else nullptr.
  const Expr* expr() const;
  const Expr* inverse_expr() const;

  bool is_identity() const;
  std::string describe() const;

  /// The inverse map, defined on the image of the domain.
  TimeMap inverted() const;

  struct Impl;

 private:
  explicit TimeMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend TimeMap compose(const TimeMap& outer, const TimeMap& inner);
  std::shared_ptr<const Impl> impl_;
};

/// outer after inner: t -> outer(inner(t)).
TimeMap compose(const TimeMap& outer, const TimeMap& inner);

}  // namespace fkdv

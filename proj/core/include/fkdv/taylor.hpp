#pragma once

// Truncated Taylor series arithmetic (forward-mode jets).
//
// A Taylor of order K holds c[0..K] with f(t0 + h) = sum_k c[k] h^k + O(h^{K+1}).
// Binary operations truncate to the smaller order of their operands.

#include <cstddef>
#include <vector>

namespace fkdv {

class Taylor {
 public:
  Taylor() : c_(1, 0.0) {}
  Taylor(double value, int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) { c_[0] = value; }

  /// The identity jet at t0: t0 + h.
  static Taylor variable(double t0, int order);
  static Taylor constant(double value, int order) { return Taylor(value, order); }
  static Taylor from_coefficients(std::vector<double> c);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double value() const { return c_[0]; }
  double operator[](int k) const { return k <= order() ? c_[static_cast<std::size_t>(k)] : 0.0; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& coefficients() const { return c_; }

  /// k-th derivative at the expansion point (k! * c[k]).
  double derivative(int k) const;

  Taylor truncated(int order) const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(double s);

 private:
  std::vector<double> c_;
};

Taylor operator+(const Taylor& a, const Taylor& b);
Taylor operator-(const Taylor& a, const Taylor& b);
Taylor operator-(const Taylor& a);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator+(const Taylor& a, double s);
Taylor operator+(double s, const Taylor& a);
Taylor operator-(const Taylor& a, double s);
Taylor operator-(double s, const Taylor& a);
Taylor operator*(const Taylor& a, double s);
Taylor operator*(double s, const Taylor& a);
Taylor operator/(const Taylor& a, double s);
Taylor operator/(double s, const Taylor& a);

// Elementary functions. Callers are responsible for the domain of a.value();
// these only propagate IEEE results.
Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor tanh(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor pow(const Taylor& a, double r);
Taylor abs(const Taylor& a);

/// Derivative of the series: order drops by one.
Taylor differentiate(const Taylor& a);

/// Antiderivative series with the given constant term: order grows by one.
Taylor integrate(const Taylor& a, double constant);

/// outer(inner(s)) where `outer` is expanded at inner.value().
Taylor compose(const Taylor& outer, const Taylor& inner);

/// Series of the inverse function: given the jet of T at t*, returns the jet of
/// T^{-1} at T(t*). Requires T'(t*) != 0.
Taylor revert(const Taylor& forward, double base_point);

}  // namespace fkdv

#pragma once

#include <functional>

namespace fkdv {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_depth = 40;
};

/// Integral of f over [a, b] (b < a allowed) by recursive bisection with a
/// 7/15-point Gauss-Kronrod rule. The tolerance is shared between
/// subintervals in proportion to their width.
///
/// Throws DomainError when f is not finite at a node (singular integrand) and
/// ConvergenceError when bisection exceeds max_depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 40);

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options);

}  // namespace fkdv

#pragma once

// Similarity reductions u = mu(t) phi(omega), omega = x s(t) - r(t), of
// u_t + u^n u_x + beta(t) u_xxxxx = 0 to
//
//   eps phi''''' + (phi^n - c_omega omega - c_0) phi' + c_phi phi = 0.

#include <optional>
#include <string>
#include <vector>

#include "fkdv/algebra.hpp"
#include "fkdv/classify.hpp"
#include "fkdv/field.hpp"
#include "fkdv/ode.hpp"

namespace fkdv {

struct ReducedODE {
  double n = 2.0;
  double epsilon = 1.0;
  double c_omega = 0.0;
  double c0 = 0.0;
  double c_phi = 0.0;

  /// phi^(5) from (omega, phi, phi', phi'', phi''', phi'''').
  double fifth(double w, const OdeState& y) const;
  /// First-order system y' = (y1, y2, y3, y4, phi^(5)).
  OdeState rhs(double w, const OdeState& y) const;
  std::string describe() const;
};

struct Reduction {
  int row = 0;        ///< 1..5
  Subalgebra sub;
  ReducedODE ode;
  Expr s, r, mu;      ///< omega = x s(t) - r(t), u = mu(t) phi(omega)
  Interval t_domain;  ///< where s, r, mu are defined (t > 0 for power laws)
  Expr beta;          ///< beta(t) of the reduced equation

  double omega(double t, double x) const;
  /// The equation the reduction applies to, on a window inside t_domain.
  EquationSpec equation(Interval window) const;
  std::string omega_text() const;
  std::string ansatz_text() const;
};

/// Throws InvariantError for g0 ("reduction yields constants only") and for
/// subalgebras without a similarity reduction.
Reduction reduction_for(const Subalgebra& sub, const ClassificationResult& c, double n);

/// DOPRI5 from the data ic at w0 to w1 with relative tolerance tol (absolute
/// tolerance tol/100). For non-integer n a negative phi is a DomainError.
Trajectory integrate_reduced(const ReducedODE& ode, const OdeState& ic, double w0, double w1, double tol = 1e-10,
                             double overflow = 1e8);

/// Largest x-interval such that omega(t, x) stays in `span` for all t in window.
/// Throws DomainError when it is empty.
Interval lift_x_range(const Reduction& r, Interval span, Interval window);

/// u = mu phi(omega) on rect with derivatives by the chain rule; phi^(5)
/// comes from the reduced ODE. Throws DomainError if rect leaves the
/// trajectory span.
SolutionField lift(const Reduction& r, const Trajectory& traj, const Rect& rect);

struct CatalogEntry {
  std::string name;
  SolutionField field;
  EquationSpec equation;
  double tolerance = 1e-9;  ///< residual the entry is expected to meet
  Interval x_range;         ///< a sampling window where the solution is not flat
};

/// Closed-form solutions: the stationary u = C (n x)^{-4/n} with
/// C^n = -8 eps (n+1)(n+2)(n+4)(3n+4), and for n = 2, eps = -1 the waves
/// u = +-2 sqrt(10) (3 tanh^2(x + 24 eps t) - 2); with nonzero alpha also
/// their images solving u_t + u^n u_x + alpha u + eps e^{-n A} u_xxxxx = 0.
/// Entries whose real-root condition fails are omitted.
std::vector<CatalogEntry> exact_catalog(double n, int epsilon, const Function& alpha = Function(),
                                        Interval window = {1.0, 2.0});

/// Real C with C^n = -8 eps (n+1)(n+2)(n+4)(3n+4), or nullopt.
std::optional<double> stationary_constant(double n, int epsilon);

}  // namespace fkdv

#pragma once

#include <string>
#include <vector>

#include "fkdv/field.hpp"
#include "fkdv/gauge.hpp"
#include "fkdv/vector_field.hpp"

namespace fkdv {

struct Grid {
  Interval t;
  Interval x;
  int nt = 40;
  int nx = 40;
  Rect rect() const { return {t, x}; }
};

struct ResidualReport {
  Grid grid;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double worst_t = 0.0;
  double worst_x = 0.0;
  int points = 0;
  bool analytic = true;     ///< analytic derivatives, else finite differences
  double fd_estimate = 0.0; ///< Richardson error estimate (finite differences only)
};

struct FdOptions {
  double step_fraction = 1e-2;  ///< h = step_fraction * grid span
};

/// Relative residual |u_t + u^n u_x + alpha u + beta u_xxxxx| / (1 + max |term|)
/// over the grid.
ResidualReport pde_residual(const SolutionField& s, const EquationSpec& e, const Grid& grid,
                            const FdOptions& fd = {});

/// Relative residual at one point from analytic derivatives.
double point_residual(const FieldJet& j, const EquationSpec& e, double t);

/// Values on a regular (t, x) lattice, e.g. read from CSV.
struct SampledField {
  std::vector<double> t;  ///< nt increasing values
  std::vector<double> x;  ///< nx increasing values
  std::vector<double> u;  ///< row-major u[i*nx + j] at (t[i], x[j])
  double at(std::size_t i, std::size_t j) const { return u[i * x.size() + j]; }
};

/// Residual of lattice data using difference quotients on the lattice itself;
/// only points with a full stencil (3 in x, 1 in t) are scored.
ResidualReport sampled_residual(const SampledField& f, const EquationSpec& e);

/// The field transformed by the flow exp(eps v):
///   u~(t, x) = e^{c eps} u(Phi_{-eps}(t), Psi_{-eps}(x)).
/// Generators with a Frame act through N^{-1} o exp(eps v^) o N. Throws
/// InvariantError when v has no explicit flow.
SolutionField flow_transform(const VectorField& v, double eps, const SolutionField& s);

/// A flow parameter moving no point of r by more than `fraction` of the
/// rectangle's extent (first-order estimate from the generator's components).
double flow_step(const VectorField& v, const Rect& r, double fraction = 0.1);

struct SymmetryCheck {
  ResidualReport baseline;
  std::vector<double> eps;
  std::vector<ResidualReport> reports;
  double threshold = 0.0;  ///< 10 * max(solution tolerance, baseline residual)
  bool passed = false;
};

SymmetryCheck symmetry_check(const VectorField& v, const SolutionField& s, const EquationSpec& e,
                             const std::vector<double>& eps_list, const Grid& grid, double solution_tol);

}  // namespace fkdv

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fkdv/classify.hpp"
#include "fkdv/vector_field.hpp"

namespace fkdv {

/// [v, w] for generators of the form tau d_t + (a x + b) d_x + c u d_u.
VectorField bracket(const VectorField& v, const VectorField& w);

struct StructureConstants {
  int dim = 0;
  std::vector<double> c;  ///< c[(i*dim + j)*dim + k]: [e_i, e_j] = sum_k c_ijk e_k
  double closure_residual = 0.0;

  double operator()(int i, int j, int k) const { return c[static_cast<std::size_t>((i * dim + j) * dim + k)]; }
  double& operator()(int i, int j, int k) { return c[static_cast<std::size_t>((i * dim + j) * dim + k)]; }

  double antisymmetry_defect() const;
  double jacobi_defect() const;
};

/// Brackets are sampled at `samples` points of `window` and expanded in the
/// basis by least squares. Throws InvariantError when the span is not closed
/// to within `tol` (relative).
StructureConstants structure_constants(const std::vector<VectorField>& basis, Interval window = {1.0, 2.0},
                                       double tol = 1e-12, int samples = 7);

struct AlgebraType {
  std::string label;          ///< A1, 2A1, A2, A3.5, ... or UNKNOWN
  std::optional<double> a;    ///< parameter of A3.5^a
  std::string detail;         ///< offending brackets for UNKNOWN
  std::string display() const;
};

/// Dimension <= 3 only. Three-dimensional algebras are put in the form
/// [e1,e2] = 0, [e2,e3] = e2, [e1,e3] = a e1 with |a| <= 1.
AlgebraType identify_algebra(const StructureConstants& s, double tol = 1e-10);

struct Subalgebra {
  std::string name;  ///< g0, g2.1, g2.2, g3, g4.1, g4.2, g4.stationary
  std::vector<VectorField> basis;
  std::optional<double> param;  ///< a of g2.2, sigma of g4.1
  std::string display() const;
};

enum class ParamKind { None, Real, Sign };

/// A member of an optimal system, possibly with a free parameter.
struct SubalgebraFamily {
  std::string name;
  ParamKind param = ParamKind::None;
  ClassificationResult cls;
  double n = 2.0;

  Subalgebra instantiate(double p = 0.0) const;
  /// Representatives; for sigma families all three signs, a = 0 for Real.
  std::vector<Subalgebra> members() const;
};

/// Optimal system of one-dimensional subalgebras. Throws InvariantError for
/// GENERIC (only the kernel exists).
std::vector<SubalgebraFamily> optimal_system(const ClassificationResult& c, double n);

/// Subalgebra by name with optional parameter; validated against the case.
Subalgebra named_subalgebra(const ClassificationResult& c, double n, const std::string& name,
                            std::optional<double> param = std::nullopt);

/// <d_t, 5nt d_t + nx d_x - 4u d_u> of the constant-coefficient algebra.
Subalgebra stationary_subalgebra(double n);

}  // namespace fkdv

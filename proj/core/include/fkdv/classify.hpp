#pragma once

// Group classification of u_t + u^n u_x + beta(t) u_xxxxx = 0.
//
// Extensions beyond the kernel d_x exist exactly when (p t + q) beta_t = r beta
// for a nonzero triple, i.e. beta/beta_t is affine in t. The three inequivalent
// triples give
//
//   POWER        beta = eps t^rho     {d_x, 5nt d_t + (rho+1)nx d_x + (rho-4)u d_u}
//   EXPONENTIAL  beta = eps e^t       {d_x, 5n d_t + nx d_x + u d_u}
//   CONSTANT     beta = eps           {d_x, d_t, 5nt d_t + nx d_x - 4u d_u}
//
// and every other beta only admits d_x (GENERIC).

#include <string>
#include <vector>

#include "fkdv/gauge.hpp"
#include "fkdv/vector_field.hpp"

namespace fkdv {

enum class Case { Generic, Power, Exponential, Constant };

const char* case_name(Case c);
/// Row number of the case in the classification list (1..4).
int case_number(Case c);

struct ClassifyingFit {
  double p = 0.0, q = 0.0, r = 0.0;  ///< (p t + q) beta_t = r beta, max(|p|,|q|,|r|) = 1
  double slope = 0.0;                ///< g = beta/beta_t ~ slope t + intercept
  double intercept = 0.0;
  double residual = 0.0;             ///< max |g - fit| / max |g|
  double flatness = 0.0;             ///< max|beta_t| width / max|beta|
  int samples = 0;                   ///< samples used in the fit
};

struct ClassificationResult {
  Case kind = Case::Generic;
  int epsilon = 1;
  double rho = 0.0;     ///< POWER: beta ~ lambda |t + kappa|^rho
  double kappa = 0.0;   ///< POWER: shift
  double m = 0.0;       ///< EXPONENTIAL: beta ~ lambda e^{m t}
  double lambda = 0.0;  ///< amplitude (POWER, EXPONENTIAL, CONSTANT)
  double tol = 0.0;

  EquivTransform gauge;          ///< original -> alpha = 0
  EquivTransform canonicalizer;  ///< alpha = 0 -> canonical beta (the G~_0 part)
  EquivTransform normalizer;     ///< canonicalizer after gauge
  EquationSpec gauged;
  EquationSpec canonical;        ///< beta in {eps t^rho, eps e^t, eps}; beta for GENERIC
  ClassifyingFit fit;
};

constexpr int kClassifySamples = 201;

/// Classifies e. With auto_gauge the equation is first mapped to alpha = 0;
/// without it, a nonzero alpha is an error.
ClassificationResult classify(const EquationSpec& e, double tol = 1e-7, bool auto_gauge = true);

/// Generators in canonical variables.
std::vector<VectorField> symmetry_basis(const ClassificationResult& c, double n);

/// The same algebra in the variables of the unreduced equation: each canonical
/// generator pulled back through the normalizer, the kernel normalized to d_x
/// and the EXPONENTIAL generator scaled by m.
std::vector<VectorField> symmetry_basis_original(const EquationSpec& e, const ClassificationResult& c);

}  // namespace fkdv

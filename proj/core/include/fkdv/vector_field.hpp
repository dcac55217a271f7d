#pragma once

// Point-symmetry generators of the form
//
//   Q = tau(t) d_t + (a(t) x + b(t)) d_x + c(t) u d_u,
//
// which is the shape every Lie symmetry of the class takes.

#include <memory>
#include <optional>
#include <string>

#include "fkdv/function.hpp"
#include "fkdv/gauge.hpp"

namespace fkdv {

struct VectorField;

/// Coefficients of a generator whose flow is explicit: all four are constants
/// except tau, which may be affine in t.
struct AffineGenerator {
  double tau0 = 0.0;  ///< tau = tau0 + tau1 t
  double tau1 = 0.0;
  double a = 0.0;     ///< xi = a x + b
  double b = 0.0;
  double c = 0.0;     ///< eta = c u
};

/// Records that a field is the pull-back of an affine generator through a
/// point transformation, so that its flow is N^{-1} o exp(eps v) o N.
struct Frame {
  AffineGenerator canonical;
  EquivTransform normalizer;
  double n = 2.0;
};

struct VectorField {
  Function tau;
  Function xi_x;  ///< coefficient of x in xi
  Function xi_0;  ///< free term of xi
  Function eta_u; ///< coefficient of u in eta
  std::string label;
  std::shared_ptr<const Frame> frame;

  static VectorField affine(const AffineGenerator& g, std::string label = {});
  static VectorField d_t() { return affine({1.0, 0.0, 0.0, 0.0, 0.0}, "d_t"); }
  static VectorField d_x() { return affine({0.0, 0.0, 0.0, 1.0, 0.0}, "d_x"); }

  /// Constant-coefficient decomposition, when the coefficients are symbolic
  /// and of the affine shape; nullopt otherwise.
  std::optional<AffineGenerator> as_affine() const;

  /// Component values (tau, a, b, c) at t.
  struct Values {
    double tau, a, b, c;
  };
  Values at(double t) const;

  std::string describe() const;
};

VectorField operator*(double s, const VectorField& v);
VectorField operator+(const VectorField& v, const VectorField& w);

/// Pull-back of a generator written in the variables of the image of g:
///   tau = tau^(T)/T',  xi = a^ x + (a^ delta2 + b^)/delta1,
///   eta = (c^ + (T''/T') tau / n) u.
VectorField conjugate(const AffineGenerator& canonical, const EquivTransform& g, double n, std::string label = {});

}  // namespace fkdv

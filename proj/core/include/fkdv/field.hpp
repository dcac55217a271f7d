#pragma once

#include <array>
#include <functional>
#include <string>

#include "fkdv/function.hpp"
#include "fkdv/gauge.hpp"

namespace fkdv {

/// u, u_t and u_x^(k) for k = 0..5 at one point.
struct FieldJet {
  double u = 0.0;
  double ut = 0.0;
  std::array<double, 6> ux{};  ///< ux[0] = u, ux[k] = d^k u / dx^k
};

struct Rect {
  Interval t;
  Interval x;
  bool contains(double tt, double xx) const { return t.contains(tt) && x.contains(xx); }
  bool contains(const Rect& o) const { return t.contains(o.t) && x.contains(o.x); }
};

enum class Provenance { Exact, Lifted, FlowTransformed, Transformed, Sampled };
const char* provenance_name(Provenance p);

/// An evaluable u(t, x) on a rectangle. Fields built from closed forms or
/// ansatz lifts carry analytic derivatives; value-only fields are
/// differentiated numerically by the verifier.
class SolutionField {
 public:
  using JetFn = std::function<FieldJet(double t, double x)>;
  using ValueFn = std::function<double(double t, double x)>;

  SolutionField() = default;
  static SolutionField analytic(JetFn jet, Rect domain, Provenance provenance, std::string description);
  static SolutionField values_only(ValueFn u, Rect domain, Provenance provenance, std::string description);

  bool has_derivatives() const { return static_cast<bool>(jet_); }
  /// Throws DomainError outside the domain.
  FieldJet jet(double t, double x) const;
  double operator()(double t, double x) const;

  const Rect& domain() const { return domain_; }
  Provenance provenance() const { return provenance_; }
  const std::string& description() const { return description_; }

  /// Same field on a smaller rectangle.
  SolutionField restricted(const Rect& r) const;
  SolutionField relabeled(Provenance provenance, std::string description) const;
  /// Drops the analytic derivatives (for cross-checking the numeric path).
  SolutionField without_derivatives() const;

 private:
  void check(double t, double x) const;
  JetFn jet_;
  ValueFn value_;
  Rect domain_;
  Provenance provenance_ = Provenance::Exact;
  std::string description_;
};

/// The image of a solution of e under g: a solution of apply_equiv(g, e),
///   u~(T(t), delta1 x + delta2) = (delta1 / T_t)^{1/n} u(t, x).
SolutionField transform_solution(const EquivTransform& g, const SolutionField& s, double n);

}  // namespace fkdv

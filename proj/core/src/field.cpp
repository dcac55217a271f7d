#include "fkdv/field.hpp"

#include <cmath>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Lifted: return "lifted";
    case Provenance::FlowTransformed: return "flow-transformed";
    case Provenance::Transformed: return "transformed";
    case Provenance::Sampled: return "sampled";
  }
  return "?";
}

SolutionField SolutionField::analytic(JetFn jet, Rect domain, Provenance provenance, std::string description) {
  SolutionField s;
  s.value_ = [jet](double t, double x) { return jet(t, x).u; };
  s.jet_ = std::move(jet);
  s.domain_ = domain;
  s.provenance_ = provenance;
  s.description_ = std::move(description);
  return s;
}

SolutionField SolutionField::values_only(ValueFn u, Rect domain, Provenance provenance, std::string description) {
  SolutionField s;
  s.value_ = std::move(u);
  s.domain_ = domain;
  s.provenance_ = provenance;
  s.description_ = std::move(description);
  return s;
}

void SolutionField::check(double t, double x) const {
  if (!value_) throw InvariantError("empty solution field");
  const double st = 1e-12 * (1.0 + std::fabs(domain_.t.width()));
  const double sx = 1e-12 * (1.0 + std::fabs(domain_.x.width()));
  if (t < domain_.t.lo - st || t > domain_.t.hi + st || x < domain_.x.lo - sx || x > domain_.x.hi + sx)
    throw DomainError("(t, x) = (" + shortest(t) + ", " + shortest(x) + ") outside the field domain [" +
                      shortest(domain_.t.lo) + ", " + shortest(domain_.t.hi) + "] x [" + shortest(domain_.x.lo) +
                      ", " + shortest(domain_.x.hi) + "]");
}

FieldJet SolutionField::jet(double t, double x) const {
  check(t, x);
  if (!jet_) throw InvariantError("field " + description_ + " has no analytic derivatives");
  return jet_(t, x);
}

double SolutionField::operator()(double t, double x) const {
  check(t, x);
  return value_(t, x);
}

SolutionField SolutionField::restricted(const Rect& r) const {
  if (!domain_.contains(r)) throw DomainError("restriction is not inside the field domain");
  SolutionField s = *this;
  s.domain_ = r;
  return s;
}

SolutionField SolutionField::relabeled(Provenance provenance, std::string description) const {
  SolutionField s = *this;
  s.provenance_ = provenance;
  s.description_ = std::move(description);
  return s;
}

SolutionField SolutionField::without_derivatives() const {
  SolutionField s = *this;
  s.jet_ = nullptr;
  return s;
}

SolutionField transform_solution(const EquivTransform& g, const SolutionField& s, double n) {
  if (g.is_identity()) return s;
  const Rect& d = s.domain();
  g.check_on(d.t);
  const Rect image{g.time().image(d.t), Interval::ordered(g.x_map(d.x.lo), g.x_map(d.x.hi))};
  const std::string desc = "image of [" + s.description() + "] under " + g.describe();
  if (!s.has_derivatives()) {
    return SolutionField::values_only(
        [g, s, n](double ts, double xs) {
          const double t = g.time().inverse(ts);
          return g.u_factor(t, n) * s(t, g.x_inverse(xs));
        },
        image, Provenance::Transformed, desc);
  }
  return SolutionField::analytic(
      [g, s, n](double ts, double xs) {
        const double t = g.time().inverse(ts);
        const Taylor U = g.u_factor_jet(t, n, 1);
        const double T1 = g.time().jet(t, 1)[1];
        const FieldJet j = s.jet(t, g.x_inverse(xs));
        FieldJet out;
        double scale = U[0];
        for (int k = 0; k <= 5; ++k) {
          out.ux[k] = scale * j.ux[k];
          scale /= g.delta1();
        }
        out.u = out.ux[0];
        out.ut = (U[1] * j.u + U[0] * j.ut) / T1;
        return out;
      },
      image, Provenance::Transformed, desc);
}

}  // namespace fkdv

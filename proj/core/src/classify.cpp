#include "fkdv/classify.hpp"

#include <algorithm>
#include <cmath>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

constexpr int kMinUsable = 10;
// Samples where |beta_t| falls below this fraction of its maximum are left out
// of the fit: beta/beta_t is huge or undefined there.
constexpr double kReject = 1e-8;

ClassifyingFit normalized(double p, double q, double r, ClassifyingFit fit) {
  const double m = std::max({std::fabs(p), std::fabs(q), std::fabs(r)});
  fit.p = p / m;
  fit.q = q / m;
  fit.r = r / m;
  return fit;
}

}  // namespace

const char* case_name(Case c) {
  switch (c) {
    case Case::Generic: return "GENERIC";
    case Case::Power: return "POWER";
    case Case::Exponential: return "EXPONENTIAL";
    case Case::Constant: return "CONSTANT";
  }
  return "?";
}

int case_number(Case c) {
  switch (c) {
    case Case::Generic: return 1;
    case Case::Power: return 2;
    case Case::Exponential: return 3;
    case Case::Constant: return 4;
  }
  return 0;
}

ClassificationResult classify(const EquationSpec& e, double tol, bool auto_gauge) {
  e.validate();
  if (!(tol > 0.0)) throw InvariantError("classification tolerance must be positive");
  if (!e.alpha.is_zero() && !auto_gauge)
    throw InvariantError("classify expects alpha = 0; gauge first or enable auto-gauge");

  ClassificationResult out;
  out.tol = tol;
  GaugeResult gr = gauge_to_zero_alpha(e);
  out.gauge = gr.transform;
  out.gauged = gr.gauged;
  out.epsilon = out.gauged.beta_sign();

  const EquationSpec& g = out.gauged;
  const Interval W = g.interval;
  const double n = g.n;
  const int N = kClassifySamples;
  std::vector<double> ts(N), b(N), bt(N);
  double max_b = 0.0, max_bt = 0.0;
  for (int i = 0; i < N; ++i) {
    ts[i] = W.sample(i, N);
    const Taylor j = g.beta.jet(ts[i], 1);
    b[i] = j[0];
    bt[i] = j[1];
    max_b = std::max(max_b, std::fabs(b[i]));
    max_bt = std::max(max_bt, std::fabs(bt[i]));
  }
  ClassifyingFit fit;
  fit.flatness = max_bt * W.width() / max_b;
  fit.samples = N;
  const double mid_beta = g.beta(W.mid());

  auto finish_constant = [&](ClassifyingFit f) {
    out.kind = Case::Constant;
    out.fit = normalized(0.0, 1.0, 0.0, f);
    out.lambda = mid_beta;
    out.canonicalizer = EquivTransform::restricted(std::pow(std::fabs(out.lambda), -0.2), 0.0, 1.0, 0.0);
    out.canonical = EquationSpec{n, Function(), Function(static_cast<double>(out.epsilon)),
                                 out.canonicalizer.time().image(W)};
  };

  if (fit.flatness <= tol) {
    finish_constant(fit);
  } else {
    std::vector<double> tu, gu;
    for (int i = 0; i < N; ++i) {
      if (std::fabs(bt[i]) <= kReject * max_bt) continue;
      tu.push_back(ts[i]);
      gu.push_back(b[i] / bt[i]);
    }
    if (static_cast<int>(tu.size()) < kMinUsable)
      throw DomainError("classification window too short: " + std::to_string(tu.size()) + " usable samples");
    // Least squares g ~ s (t - tm) + c0 with centred abscissa.
    const double tm = W.mid();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(tu.size());
    for (std::size_t i = 0; i < tu.size(); ++i) {
      const double x = tu[i] - tm;
      sx += x;
      sy += gu[i];
      sxx += x * x;
      sxy += x * gu[i];
    }
    const double det = k * sxx - sx * sx;
    const double s = (k * sxy - sx * sy) / det;
    const double c0 = (sy - s * sx) / k;
    double max_g = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < tu.size(); ++i) {
      max_g = std::max(max_g, std::fabs(gu[i]));
      worst = std::max(worst, std::fabs(gu[i] - (s * (tu[i] - tm) + c0)));
    }
    fit.slope = s;
    fit.intercept = c0 - s * tm;
    fit.residual = worst / max_g;
    fit.samples = static_cast<int>(tu.size());

    if (fit.residual > tol) {
      out.kind = Case::Generic;
      out.fit = fit;
      out.canonical = g;
    } else if (std::fabs(s) * W.width() / max_g <= tol) {
      out.kind = Case::Exponential;
      out.m = 1.0 / c0;
      out.fit = normalized(0.0, 1.0, out.m, fit);
      out.lambda = mid_beta * std::exp(-out.m * tm);
      const double d1 = std::copysign(std::pow(std::fabs(out.m) / std::fabs(out.lambda), 0.2), out.m);
      out.canonicalizer = EquivTransform::restricted(d1, 0.0, out.m, 0.0);
      const Expr t = Expr::variable();
      out.canonical = EquationSpec{n, Function(), Function(out.epsilon * exp(t)), out.canonicalizer.time().image(W)};
    } else {
      out.rho = 1.0 / s;
      out.kappa = fit.intercept / s;
      if (std::fabs(out.rho) < tol) {
        finish_constant(fit);
      } else {
        out.kind = Case::Power;
        out.fit = normalized(1.0, out.kappa, out.rho, fit);
        const double lo = W.lo + out.kappa, hi = W.hi + out.kappa;
        if (!(lo * hi > 0.0))
          throw InvariantError("power-law shift t + " + shortest(out.kappa) + " changes sign on the window");
        const double sw = lo > 0.0 ? 1.0 : -1.0;
        out.lambda = mid_beta / std::pow(std::fabs(tm + out.kappa), out.rho);
        out.canonicalizer =
            EquivTransform::restricted(sw * std::pow(std::fabs(out.lambda), -0.2), 0.0, sw, sw * out.kappa);
        const Expr t = Expr::variable();
        out.canonical = EquationSpec{n, Function(), Function(out.epsilon * pow(t, out.rho)),
                                     out.canonicalizer.time().image(W)};
      }
    }
  }
  out.normalizer = compose(out.canonicalizer, out.gauge);
  return out;
}

std::vector<VectorField> symmetry_basis(const ClassificationResult& c, double n) {
  std::vector<VectorField> basis{VectorField::d_x()};
  basis.back().label = "e1";
  switch (c.kind) {
    case Case::Generic: break;
    case Case::Power:
      basis.push_back(VectorField::affine({0.0, 5 * n, (c.rho + 1) * n, 0.0, c.rho - 4}, "e2"));
      break;
    case Case::Exponential: basis.push_back(VectorField::affine({5 * n, 0.0, n, 0.0, 1.0}, "e2")); break;
    case Case::Constant:
      basis.push_back(VectorField::d_t());
      basis.back().label = "e2";
      basis.push_back(VectorField::affine({0.0, 5 * n, n, 0.0, -4.0}, "e3"));
      break;
  }
  return basis;
}

std::vector<VectorField> symmetry_basis_original(const EquationSpec& e, const ClassificationResult& c) {
  const double n = e.n;
  std::vector<VectorField> canonical = symmetry_basis(c, n);
  if (c.normalizer.is_identity()) return canonical;
  std::vector<VectorField> out;
  for (const VectorField& v : canonical) {
    AffineGenerator g = *v.as_affine();
    double scale = 1.0;
    if (v.label == "e1") scale = c.normalizer.delta1();
    if (c.kind == Case::Exponential && v.label == "e2") scale = c.m;
    g = {scale * g.tau0, scale * g.tau1, scale * g.a, scale * g.b, scale * g.c};
    out.push_back(conjugate(g, c.normalizer, n, v.label));
  }
  return out;
}

}  // namespace fkdv

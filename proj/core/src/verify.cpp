#include "fkdv/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

double power_n(double u, double n) {
  const double r = std::pow(u, n);
  if (!std::isfinite(r)) throw DomainError("u^n undefined for u = " + shortest(u) + ", n = " + shortest(n));
  return r;
}

struct Terms {
  double ut, nonlinear, damping, dispersion;
  double residual() const {
    const double m = std::max({std::fabs(ut), std::fabs(nonlinear), std::fabs(damping), std::fabs(dispersion)});
    return std::fabs(ut + nonlinear + damping + dispersion) / (1.0 + m);
  }
};

// Central differences with one Richardson step; `err` gets |D(h/2) - D(h)|.
double d1(const std::function<double(double)>& f, double z, double h, double& err) {
  auto D = [&](double k) { return (f(z + k) - f(z - k)) / (2 * k); };
  const double a = D(h), b = D(h / 2);
  err = std::max(err, std::fabs(b - a));
  return (4 * b - a) / 3;
}

double d5(const std::function<double(double)>& f, double z, double h, double& err) {
  auto D = [&](double k) {
    return (-f(z - 3 * k) + 4 * f(z - 2 * k) - 5 * f(z - k) + 5 * f(z + k) - 4 * f(z + 2 * k) + f(z + 3 * k)) /
           (2 * std::pow(k, 5));
  };
  const double a = D(h), b = D(h / 2);
  err = std::max(err, std::fabs(b - a));
  return (4 * b - a) / 3;
}

double step_within(double h, double z, const Interval& d, int reach) {
  const double room = std::min(z - d.lo, d.hi - z) / reach;
  if (room >= h) return h;
  if (room < h / 4)
    throw DomainError("grid point " + shortest(z) + " too close to the field boundary for finite differences");
  return room;
}

double flow_1d(double shift, double rate, double eps, double z) {
  if (rate == 0.0) return z + shift * eps;
  return std::exp(rate * eps) * z + shift * std::expm1(rate * eps) / rate;
}

Interval flow_interval(double shift, double rate, double eps, const Interval& d) {
  return {flow_1d(shift, rate, eps, d.lo), flow_1d(shift, rate, eps, d.hi)};
}

SolutionField affine_flow(const AffineGenerator& g, double eps, const SolutionField& s) {
  if (eps == 0.0) return s;
  const Rect d = s.domain();
  const Rect image{flow_interval(g.tau0, g.tau1, eps, d.t), flow_interval(g.b, g.a, eps, d.x)};
  const double amp = std::exp(g.c * eps);
  const std::string desc = "flow(eps=" + shortest(eps) + ") of [" + s.description() + "]";
  if (!s.has_derivatives()) {
    return SolutionField::values_only(
        [g, eps, amp, s](double t, double x) {
          return amp * s(flow_1d(g.tau0, g.tau1, -eps, t), flow_1d(g.b, g.a, -eps, x));
        },
        image, Provenance::FlowTransformed, desc);
  }
  const double dt = std::exp(-g.tau1 * eps), dx = std::exp(-g.a * eps);
  return SolutionField::analytic(
      [g, eps, amp, dt, dx, s](double t, double x) {
        const FieldJet j = s.jet(flow_1d(g.tau0, g.tau1, -eps, t), flow_1d(g.b, g.a, -eps, x));
        FieldJet out;
        double f = amp;
        for (int k = 0; k <= 5; ++k) {
          out.ux[k] = f * j.ux[k];
          f *= dx;
        }
        out.u = out.ux[0];
        out.ut = amp * dt * j.ut;
        return out;
      },
      image, Provenance::FlowTransformed, desc);
}

}  // namespace

ResidualReport pde_residual(const SolutionField& s, const EquationSpec& e, const Grid& grid, const FdOptions& fd) {
  if (grid.nt < 1 || grid.nx < 1) throw InvariantError("grid needs at least one point per axis");
  if (!s.domain().contains(grid.rect())) throw DomainError("grid leaves the field domain");
  const double tslack = 1e-12 * (1.0 + e.interval.width());
  if (grid.t.lo < e.interval.lo - tslack || grid.t.hi > e.interval.hi + tslack)
    throw DomainError("grid leaves the equation's t-interval");

  ResidualReport rep;
  rep.grid = grid;
  rep.analytic = s.has_derivatives();
  const double ht = fd.step_fraction * std::max(grid.t.width(), 1e-6);
  const double hx = fd.step_fraction * std::max(grid.x.width(), 1e-6);
  double sum = 0.0;
  double fd_err = 0.0;
  for (int i = 0; i < grid.nt; ++i) {
    const double t = grid.t.sample(i, grid.nt);
    const double alpha = e.alpha(t), beta = e.beta(t);
    for (int j = 0; j < grid.nx; ++j) {
      const double x = grid.x.sample(j, grid.nx);
      double u, ut, ux, u5;
      if (rep.analytic) {
        const FieldJet jt = s.jet(t, x);
        u = jt.u;
        ut = jt.ut;
        ux = jt.ux[1];
        u5 = jt.ux[5];
      } else {
        u = s(t, x);
        const double hxx = step_within(hx, x, s.domain().x, 3);
        const double htt = step_within(ht, t, s.domain().t, 1);
        const std::function<double(double)> along_x = [&](double z) { return s(t, z); };
        const std::function<double(double)> along_t = [&](double z) { return s(z, x); };
        double ex = 0.0, et = 0.0, e5 = 0.0;
        ux = d1(along_x, x, hxx, ex);
        u5 = d5(along_x, x, hxx, e5);
        ut = d1(along_t, t, htt, et);
        fd_err = std::max({fd_err, ex, et, e5 * std::fabs(beta)});
      }
      const Terms terms{ut, power_n(u, e.n) * ux, alpha * u, beta * u5};
      const double r = terms.residual();
      if (!std::isfinite(r)) throw DomainError("residual is not finite at (" + shortest(t) + ", " + shortest(x) + ")");
      sum += r;
      ++rep.points;
      if (r > rep.max_rel || rep.points == 1) {
        rep.max_rel = r;
        rep.worst_t = t;
        rep.worst_x = x;
      }
    }
  }
  rep.mean_rel = sum / rep.points;
  rep.fd_estimate = fd_err;
  return rep;
}

double point_residual(const FieldJet& j, const EquationSpec& e, double t) {
  return Terms{j.ut, power_n(j.u, e.n) * j.ux[1], e.alpha(t) * j.u, e.beta(t) * j.ux[5]}.residual();
}

ResidualReport sampled_residual(const SampledField& f, const EquationSpec& e) {
  const std::size_t nt = f.t.size(), nx = f.x.size();
  if (nt < 3 || nx < 7) throw InvariantError("sampled field needs at least 3 t-values and 7 x-values");
  if (f.u.size() != nt * nx) throw InvariantError("sampled field is not a full lattice");
  const double dt = (f.t.back() - f.t.front()) / static_cast<double>(nt - 1);
  const double dx = (f.x.back() - f.x.front()) / static_cast<double>(nx - 1);
  for (std::size_t i = 1; i < nt; ++i)
    if (std::fabs(f.t[i] - f.t[i - 1] - dt) > 1e-9 * (1.0 + std::fabs(dt)))
      throw InvariantError("t samples are not uniformly spaced");
  for (std::size_t j = 1; j < nx; ++j)
    if (std::fabs(f.x[j] - f.x[j - 1] - dx) > 1e-9 * (1.0 + std::fabs(dx)))
      throw InvariantError("x samples are not uniformly spaced");

  ResidualReport rep;
  rep.analytic = false;
  rep.grid = {{f.t[1], f.t[nt - 2]}, {f.x[3], f.x[nx - 4]}, static_cast<int>(nt - 2), static_cast<int>(nx - 6)};
  double sum = 0.0;
  const bool wide_x = nx >= 9;
  for (std::size_t i = 1; i + 1 < nt; ++i) {
    const double t = f.t[i];
    if (!e.interval.contains(t)) throw DomainError("sample time " + shortest(t) + " outside the equation's interval");
    const double alpha = e.alpha(t), beta = e.beta(t);
    for (std::size_t j = 3; j + 3 < nx; ++j) {
      auto U = [&](long di, long dj) {
        return f.at(static_cast<std::size_t>(static_cast<long>(i) + di), static_cast<std::size_t>(static_cast<long>(j) + dj));
      };
      const double u = U(0, 0);
      const double ut = (U(1, 0) - U(-1, 0)) / (2 * dt);
      const double ux = wide_x ? (-U(0, 2) + 8 * U(0, 1) - 8 * U(0, -1) + U(0, -2)) / (12 * dx)
                               : (U(0, 1) - U(0, -1)) / (2 * dx);
      const double u5 = (-U(0, -3) + 4 * U(0, -2) - 5 * U(0, -1) + 5 * U(0, 1) - 4 * U(0, 2) + U(0, 3)) /
                        (2 * std::pow(dx, 5));
      const Terms terms{ut, power_n(u, e.n) * ux, alpha * u, beta * u5};
      const double r = terms.residual();
      sum += r;
      ++rep.points;
      if (r > rep.max_rel || rep.points == 1) {
        rep.max_rel = r;
        rep.worst_t = t;
        rep.worst_x = f.x[j];
      }
    }
  }
  rep.mean_rel = sum / rep.points;
  return rep;
}

SolutionField flow_transform(const VectorField& v, double eps, const SolutionField& s) {
  if (v.frame) {
    const Frame& fr = *v.frame;
    const SolutionField canonical = transform_solution(fr.normalizer, s, fr.n);
    const EquivTransform back = invert(fr.normalizer);
    SolutionField moved = affine_flow(fr.canonical, eps, canonical);
    // Keep only the part the inverse normalizer is defined on.
    const Interval reach = back.time().domain();
    const Interval mt = moved.domain().t;
    const Interval kept{std::max(mt.lo, reach.lo), std::min(mt.hi, reach.hi)};
    if (!(kept.lo < kept.hi)) throw DomainError("flow with eps = " + shortest(eps) + " leaves the normalizer's range");
    if (kept.lo != mt.lo || kept.hi != mt.hi) moved = moved.restricted({kept, moved.domain().x});
    return transform_solution(back, moved, fr.n)
        .relabeled(Provenance::FlowTransformed, "flow(eps=" + shortest(eps) + ") of [" + s.description() +
                                                    "] through " + fr.normalizer.describe());
  }
  const auto g = v.as_affine();
  if (!g) throw InvariantError("generator " + v.describe() + " has no explicit flow");
  return affine_flow(*g, eps, s);
}

double flow_step(const VectorField& v, const Rect& r, double fraction) {
  constexpr int kSamples = 9;
  double speed_t = 0.0, speed_x = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const VectorField::Values c = v.at(r.t.sample(i, kSamples));
    speed_t = std::max(speed_t, std::fabs(c.tau));
    for (double x : {r.x.lo, r.x.hi}) speed_x = std::max(speed_x, std::fabs(c.a * x + c.b));
  }
  double eps = 1.0;
  if (speed_t > 0.0) eps = std::min(eps, fraction * r.t.width() / speed_t);
  if (speed_x > 0.0) eps = std::min(eps, fraction * r.x.width() / speed_x);
  return eps;
}

SymmetryCheck symmetry_check(const VectorField& v, const SolutionField& s, const EquationSpec& e,
                             const std::vector<double>& eps_list, const Grid& grid, double solution_tol) {
  SymmetryCheck out;
  out.baseline = pde_residual(s, e, grid);
  out.threshold = 10.0 * std::max(solution_tol, out.baseline.max_rel);
  out.passed = true;
  for (double eps : eps_list) {
    const SolutionField moved = flow_transform(v, eps, s);
    if (!moved.domain().contains(grid.rect()))
      throw DomainError("flow with eps = " + shortest(eps) + " moves the field off the check grid");
    out.eps.push_back(eps);
    out.reports.push_back(pde_residual(moved, e, grid));
    out.passed = out.passed && out.reports.back().max_rel <= out.threshold;
  }
  return out;
}

}  // namespace fkdv

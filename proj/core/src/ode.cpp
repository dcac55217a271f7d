#include "fkdv/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState r = y;
  for (const auto& [c, k] : terms)
    for (int i = 0; i < kOdeDim; ++i) r[i] += h * c * (*k)[i];
  return r;
}

void check_finite(const OdeState& y, double w) {
  for (double v : y)
    if (!std::isfinite(v)) throw DomainError("ODE right-hand side is not finite at w=" + shortest(w));
}

}  // namespace

Trajectory integrate_dopri5(const OdeRhs& f, double w0, double w1, const OdeState& y0, const OdeOptions& opt) {
  Trajectory tr;
  tr.w0_ = w0;
  tr.y0_ = y0;
  tr.w_.push_back(w0);
  if (w1 == w0) return tr;
  const double dir = w1 > w0 ? 1.0 : -1.0;
  const double span = std::fabs(w1 - w0);

  auto err_norm = [&](const OdeState& a, const OdeState& b, const OdeState& e) {
    double s = 0.0;
    for (int i = 0; i < kOdeDim; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::fabs(a[i]), std::fabs(b[i]));
      s += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(s / kOdeDim);
  };

  double w = w0;
  OdeState y = y0;
  OdeState k1 = f(w, y);
  check_finite(k1, w);

  double h = opt.h_init;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    double d0 = 0, dd1 = 0;
    for (int i = 0; i < kOdeDim; ++i) {
      const double sc = opt.atol + opt.rtol * std::fabs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      dd1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / kOdeDim);
    dd1 = std::sqrt(dd1 / kOdeDim);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, span);
    const OdeState y1 = axpy(y, dir * h0, {{1.0, &k1}});
    const OdeState f1 = f(w + dir * h0, y1);
    double d2 = 0;
    for (int i = 0; i < kOdeDim; ++i) {
      const double sc = opt.atol + opt.rtol * std::fabs(y[i]);
      d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / kOdeDim) / h0;
    const double m = std::max(dd1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    h = std::min({100 * h0, h1, span});
  }

  bool last_rejected = false;
  int steps = 0;
  while (dir * (w1 - w) > 0.0) {
    if (++steps > opt.max_steps) throw ConvergenceError("ODE integration exceeded " + std::to_string(opt.max_steps) + " steps");
    const double remaining = std::fabs(w1 - w);
    if (h >= remaining) h = remaining;
    if (h < 1e-14 * std::max(1.0, std::fabs(w)))
      throw ConvergenceError("step size underflow at w=" + shortest(w) + " (near-singular trajectory)");
    const double hs = dir * h;
    const OdeState k2 = f(w + c2 * hs, axpy(y, hs, {{a21, &k1}}));
    const OdeState k3 = f(w + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
    const OdeState k4 = f(w + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const OdeState k5 = f(w + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const OdeState ys = axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const OdeState k6 = f(w + hs, ys);
    const OdeState ynew = axpy(y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const OdeState k7 = f(w + hs, ynew);
    bool finite = true;
    for (const OdeState* k : {&k2, &k3, &k4, &k5, &k6, &k7})
      for (double v : *k) finite = finite && std::isfinite(v);
    double err = 0.0;
    if (finite) {
      OdeState e{};
      for (int i = 0; i < kOdeDim; ++i)
        e[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = err_norm(y, ynew, e);
    }
    if (!finite || !(err <= 1.0)) {
      ++tr.rejected_;
      const double fac = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
      h *= std::min(fac, 1.0);
      last_rejected = true;
      continue;
    }
    std::array<OdeState, 5> r{};
    for (int i = 0; i < kOdeDim; ++i) {
      const double dy = ynew[i] - y[i];
      const double bspl = hs * k1[i] - dy;
      r[0][i] = y[i];
      r[1][i] = dy;
      r[2][i] = bspl;
      r[3][i] = dy - hs * k7[i] - bspl;
      r[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    tr.coef_.push_back(r);
    tr.h_.push_back(hs);
    w = (h == remaining) ? w1 : w + hs;
    tr.w_.push_back(w);
    y = ynew;
    k1 = k7;

    if (std::fabs(y[0]) > opt.overflow) {
      tr.truncated_ = true;
      break;
    }
    double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    h *= fac;
    last_rejected = false;
  }
  return tr;
}

OdeState Trajectory::operator()(double w) const {
  if (coef_.empty()) {
    if (w != w0_) throw DomainError("trajectory has zero length");
    return y0_;
  }
  const double lo = std::min(w_.front(), w_.back()), hi = std::max(w_.front(), w_.back());
  const double slack = 1e-12 * (1.0 + hi - lo);
  if (w < lo - slack || w > hi + slack)
    throw DomainError("w=" + shortest(w) + " outside the trajectory span [" + shortest(lo) + ", " + shortest(hi) + "]");
  const bool forward = w_.back() > w_.front();
  std::size_t k;
  if (forward)
    k = static_cast<std::size_t>(std::upper_bound(w_.begin(), w_.end(), w) - w_.begin());
  else
    k = static_cast<std::size_t>(std::upper_bound(w_.begin(), w_.end(), w, std::greater<double>()) - w_.begin());
  k = std::clamp<std::size_t>(k, 1, coef_.size()) - 1;
  const double th = (w - w_[k]) / h_[k];
  const double th1 = 1.0 - th;
  const auto& r = coef_[k];
  OdeState y{};
  for (int i = 0; i < kOdeDim; ++i) y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
  return y;
}

}  // namespace fkdv

#include "fkdv/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fkdv/error.hpp"

namespace fkdv {
namespace {

// Kronrod abscissae on [0, 1); odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
  double magnitude;
};

double sample(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw DomainError("singular integrand at t=" + std::to_string(x));
  return v;
}

Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = sample(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double magnitude = std::fabs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = sample(f, center - dx);
    const double f2 = sample(f, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    magnitude += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {kronrod * half, std::fabs((kronrod - gauss) * half), magnitude * std::fabs(half)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol_per_width,
             int depth, const QuadratureOptions& opt) {
  const Estimate est = gauss_kronrod(f, a, b);
  const double local_tol = tol_per_width * std::fabs(b - a);
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * est.magnitude;
  if (est.error <= local_tol || est.error <= roundoff) return est.value;
  if (depth >= opt.max_depth)
    throw ConvergenceError("quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "] after " + std::to_string(depth) + " bisections");
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, tol_per_width, depth + 1, opt) +
         adapt(f, mid, b, tol_per_width, depth + 1, opt);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (a == b) return 0.0;
  const double tol_per_width = options.abs_tol / std::fabs(b - a);
  return adapt(f, a, b, tol_per_width, 0, options);
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
  return integrate(f, a, b, QuadratureOptions{abs_tol, max_depth});
}

}  // namespace fkdv

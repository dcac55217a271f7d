#include <cmath>
#include <random>

#include "doctest.h"
#include "fkdv/classify.hpp"
#include "fkdv/error.hpp"

using namespace fkdv;

namespace {

EquationSpec eq(double n, const char* alpha, const char* beta, Interval I = {1, 2}) {
  return EquationSpec::make(n, Function(parse(alpha)), Function(parse(beta)), I);
}

// Determining equations of tau d_t + (a x + b) d_x + c u d_u for
// u_t + u^n u_x + alpha u + beta u_xxxxx = 0, from the prolongation:
//   a' = b' = 0,  n c = a - tau',  tau' beta + tau beta' = 5 a beta,  c' + (tau alpha)' = 0.
double determining_defect(const VectorField& v, const EquationSpec& e) {
  double worst = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double t = e.interval.sample(i, 9);
    const Taylor tau = v.tau.jet(t, 1), a = v.xi_x.jet(t, 1), b = v.xi_0.jet(t, 1), c = v.eta_u.jet(t, 1);
    const Taylor al = e.alpha.jet(t, 1), be = e.beta.jet(t, 1);
    const double scale = 1.0 + std::fabs(tau[0]) + std::fabs(tau[1]) + std::fabs(a[0]) + std::fabs(c[0]);
    const double defects[] = {
        a[1],
        b[1],
        e.n * c[0] - (a[0] - tau[1]),
        (tau[1] * be[0] + tau[0] * be[1] - 5 * a[0] * be[0]) / std::fabs(be[0]),
        c[1] + tau[1] * al[0] + tau[0] * al[1],
    };
    for (double d : defects) worst = std::max(worst, std::fabs(d) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("case names and numbers") {
  CHECK(std::string(case_name(Case::Generic)) == "GENERIC");
  CHECK(std::string(case_name(Case::Power)) == "POWER");
  CHECK(std::string(case_name(Case::Exponential)) == "EXPONENTIAL");
  CHECK(std::string(case_name(Case::Constant)) == "CONSTANT");
  CHECK(case_number(Case::Generic) == 1);
  CHECK(case_number(Case::Constant) == 4);
}

TEST_CASE("canonical coefficients") {
  SUBCASE("t^2: POWER, rho = 2, eps = +1, two generators") {
    const ClassificationResult c = classify(eq(2, "0", "t^2"));
    CHECK(c.kind == Case::Power);
    CHECK(c.rho == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(c.epsilon == 1);
    CHECK(symmetry_basis(c, 2).size() == 2);
  }
  SUBCASE("1: CONSTANT, three generators") {
    const ClassificationResult c = classify(eq(2, "0", "1"));
    CHECK(c.kind == Case::Constant);
    CHECK(symmetry_basis(c, 2).size() == 3);
  }
  SUBCASE("-exp(t): EXPONENTIAL, eps = -1") {
    const ClassificationResult c = classify(eq(3, "0", "-exp(t)"));
    CHECK(c.kind == Case::Exponential);
    CHECK(c.epsilon == -1);
    CHECK(c.m == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("-1/t: POWER with rho = -1") {
    const ClassificationResult c = classify(eq(2, "0", "-1/t"));
    CHECK(c.kind == Case::Power);
    CHECK(c.rho == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(c.epsilon == -1);
  }
  SUBCASE("generic coefficient") {
    const ClassificationResult c = classify(eq(2, "0", "1+t^2+sin(t)"));
    CHECK(c.kind == Case::Generic);
    CHECK(c.fit.residual > 1e-7);
    CHECK(symmetry_basis(c, 2).size() == 1);
  }
}

TEST_CASE("shifted and scaled forms are recognized") {
  const ClassificationResult p = classify(eq(2, "0", "3*(t+0.5)^1.7"));
  CHECK(p.kind == Case::Power);
  CHECK(p.rho == doctest::Approx(1.7).epsilon(1e-8));
  CHECK(p.kappa == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(p.lambda == doctest::Approx(3.0).epsilon(1e-8));
  // The canonical equation has beta = eps t^rho exactly on the image window.
  const EquationSpec& ce = p.canonical;
  for (int i = 0; i < 5; ++i) {
    const double s = ce.interval.sample(i, 5);
    CHECK(ce.beta(s) == doctest::Approx(std::pow(s, p.rho)));
  }
  // Reflected power laws (t + kappa < 0 on the window).
  const ClassificationResult q = classify(eq(2, "0", "(3-t)^(-2)"));
  CHECK(q.kind == Case::Power);
  CHECK(q.rho == doctest::Approx(-2.0).epsilon(1e-8));

  const ClassificationResult x = classify(eq(2, "0", "0.2*exp(-3*t)"));
  CHECK(x.kind == Case::Exponential);
  CHECK(x.m == doctest::Approx(-3.0).epsilon(1e-8));
  CHECK(x.lambda == doctest::Approx(0.2).epsilon(1e-8));

  const ClassificationResult k = classify(eq(2, "0", "-7"));
  CHECK(k.kind == Case::Constant);
  CHECK(k.epsilon == -1);
  CHECK(k.lambda == doctest::Approx(-7.0));
}

TEST_CASE("alpha is gauged away first") {
  CHECK_THROWS_AS(classify(eq(2, "1/t", "1"), 1e-7, false), InvariantError);
  // alpha = 1/t, n = 3: T = (1 - t^-2)/2, T_t = t^-3. beta = lambda T_t e^{m T} with lambda = 2, m = 1.5.
  const ClassificationResult c = classify(eq(3, "1/t", "2*t^(-3)*exp(1.5*(1-t^(-2))/2)"));
  CHECK(c.kind == Case::Exponential);
  CHECK(c.m == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(c.lambda == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(c.epsilon == 1);
}

TEST_CASE("original-variable bases against closed forms") {
  SUBCASE("row 2: alpha = 0.3, beta = lambda T_t (T + kappa)^rho") {
    // n = 2: T_t = exp(-0.6 (t - 1)), T = (1 - exp(-0.6 (t - 1)))/0.6.
    const EquationSpec e = eq(2, "0.3", "1.5*exp(-0.6*(t-1))*((1-exp(-0.6*(t-1)))/0.6+0.5)^2.5");
    const ClassificationResult c = classify(e);
    REQUIRE(c.kind == Case::Power);
    CHECK(c.rho == doctest::Approx(2.5).epsilon(1e-7));
    const auto basis = symmetry_basis_original(e, c);
    REQUIRE(basis.size() == 2);
    for (double t : {1.1, 1.5, 1.9}) {
      const double Tt = std::exp(-0.6 * (t - 1)), T = (1 - Tt) / 0.6;
      const auto e1 = basis[0].at(t), e2 = basis[1].at(t);
      CHECK(e1.tau == doctest::Approx(0.0).scale(1.0));
      CHECK(e1.b == doctest::Approx(1.0));
      CHECK(e2.tau == doctest::Approx(5 * 2 * (T + 0.5) / Tt).epsilon(1e-7));
      CHECK(e2.a == doctest::Approx(2 * 3.5).epsilon(1e-7));
      CHECK(e2.b == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
      CHECK(e2.c == doctest::Approx(2.5 - 4 - 5 * 2 * 0.3 * (T + 0.5) / Tt).epsilon(1e-7));
    }
  }
  SUBCASE("row 3: alpha = 1/t, n = 3") {
    const EquationSpec e = eq(3, "1/t", "2*t^(-3)*exp(1.5*(1-t^(-2))/2)");
    const ClassificationResult c = classify(e);
    const auto basis = symmetry_basis_original(e, c);
    REQUIRE(basis.size() == 2);
    for (double t : {1.1, 1.5, 1.9}) {
      const auto e2 = basis[1].at(t);
      // 5n T_t^{-1} d_t + m n x d_x + (m - 5 n alpha T_t^{-1}) u d_u
      CHECK(e2.tau == doctest::Approx(15 * t * t * t).epsilon(1e-8));
      CHECK(e2.a == doctest::Approx(4.5).epsilon(1e-8));
      CHECK(e2.c == doctest::Approx(1.5 - 15 * t * t).epsilon(1e-8));
    }
  }
  SUBCASE("row 4: alpha = sin t + 2, beta = -T_t") {
    const EquationSpec e = eq(2, "sin(t)+2", "-exp(-2*(cos(1)-cos(t)+2*(t-1)))");
    const ClassificationResult c = classify(e);
    REQUIRE(c.kind == Case::Constant);
    const auto basis = symmetry_basis_original(e, c);
    REQUIRE(basis.size() == 3);
    const Function Tt = e.beta * Function(-1.0);
    for (double t : {1.2, 1.6}) {
      const double tt = Tt(t);
      // T = int_1^t T_t, by Simpson on a fine grid as an independent oracle.
      double T = 0;
      const int N = 2000;
      for (int i = 0; i <= N; ++i) {
        const double s = 1 + (t - 1) * i / N, w = (i == 0 || i == N) ? 1 : (i % 2 ? 4 : 2);
        T += w * Tt(s);
      }
      T *= (t - 1) / (3 * N);
      const double al = std::sin(t) + 2;
      const auto e2 = basis[1].at(t), e3 = basis[2].at(t);
      CHECK(e2.tau == doctest::Approx(1 / tt).epsilon(1e-8));
      CHECK(e2.c == doctest::Approx(-al / tt).epsilon(1e-8));
      CHECK(e3.tau == doctest::Approx(10 * T / tt).epsilon(1e-8));
      CHECK(e3.a == doctest::Approx(2.0).epsilon(1e-8));
      CHECK(e3.c == doctest::Approx(-(4 + 10 * al * T / tt)).epsilon(1e-8));
    }
  }
}

TEST_CASE("property: every basis element solves the determining equations") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rho(-3, 3), lam(0.5, 2), shift(0.1, 1);
  const char* alphas[] = {"0", "0.4", "1/t", "sin(t)+2"};
  for (int i = 0; i < 24; ++i) {
    const double n = 2 + i % 3;
    const Function alpha(parse(alphas[i % 4]));
    const TimeMap T = gauge_time_map(alpha, n, {1, 2});
    const Interval img = T.image({1, 2});
    const Expr t = Expr::variable();
    const double r = rho(rng), l = lam(rng), k = 1 - img.lo + shift(rng);
    const Expr gauged_beta = i % 3 == 0 ? l * pow(t + k, r) : i % 3 == 1 ? -l * exp(1.3 * t) : Expr(l);
    const EquationSpec gauged = EquationSpec::make(n, Function(), Function(gauged_beta), img);
    const EquationSpec e = attach_alpha(gauged, alpha, {1, 2});
    const ClassificationResult c = classify(e);
    INFO("instance " << i << ": alpha = " << alphas[i % 4] << ", gauged beta = " << print(gauged_beta));
    for (const VectorField& v : symmetry_basis(c, n)) CHECK(determining_defect(v, c.canonical) <= 1e-9);
    for (const VectorField& v : symmetry_basis_original(e, c)) CHECK(determining_defect(v, e) <= 1e-7);
  }
}

TEST_CASE("a generic equation only has the kernel, and d_t is not a symmetry of Case 2") {
  const EquationSpec e = eq(2, "0", "t^2");
  CHECK(determining_defect(VectorField::d_t(), e) > 1e-2);
  CHECK(determining_defect(VectorField::d_x(), e) == 0.0);
}

TEST_CASE("tolerance controls the verdict") {
  // A tiny perturbation of a power law is GENERIC at a strict tolerance, POWER at a loose one.
  const EquationSpec e = eq(2, "0", "t^2*(1+1e-5*sin(7*t))");
  CHECK(classify(e, 1e-9).kind == Case::Generic);
  CHECK(classify(e, 1e-2).kind == Case::Power);
}

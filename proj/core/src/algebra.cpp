#include "fkdv/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

// rho = -1 separates the abelian power case; fitted exponents carry more
// error than the raw tolerance, so the test is looser.
constexpr double kRhoTol = 1e-6;

AffineGenerator affine_bracket(const AffineGenerator& v, const AffineGenerator& w) {
  return {v.tau0 * w.tau1 - w.tau0 * v.tau1, 0.0, 0.0, v.b * w.a - w.b * v.a, 0.0};
}

using Vec3 = Eigen::Vector3d;

Vec3 lie(const StructureConstants& s, const Vec3& x, const Vec3& y) {
  Vec3 r = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[k] += x[i] * y[j] * s(i, j, k);
  return r;
}

std::string bracket_table(const StructureConstants& s) {
  std::string out;
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j) {
      out += "[e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + "] =";
      bool any = false;
      for (int k = 0; k < s.dim; ++k) {
        if (s(i, j, k) == 0.0) continue;
        out += " " + shortest(s(i, j, k)) + "*e" + std::to_string(k + 1);
        any = true;
      }
      if (!any) out += " 0";
      out += "; ";
    }
  return out;
}

}  // namespace

VectorField bracket(const VectorField& v, const VectorField& w) {
  const Function tv1 = derivative(v.tau), tw1 = derivative(w.tau);
  VectorField r;
  r.tau = v.tau * tw1 - w.tau * tv1;
  r.xi_x = v.tau * derivative(w.xi_x) - w.tau * derivative(v.xi_x);
  r.xi_0 = v.tau * derivative(w.xi_0) - w.tau * derivative(v.xi_0) + v.xi_0 * w.xi_x - w.xi_0 * v.xi_x;
  r.eta_u = v.tau * derivative(w.eta_u) - w.tau * derivative(v.eta_u);
  r.label = "[" + v.label + "," + w.label + "]";
  if (v.frame && w.frame && v.frame->n == w.frame->n &&
      v.frame->normalizer.describe() == w.frame->normalizer.describe()) {
    auto f = std::make_shared<Frame>(*v.frame);
    f->canonical = affine_bracket(v.frame->canonical, w.frame->canonical);
    r.frame = std::move(f);
  }
  return r;
}

double StructureConstants::antisymmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) worst = std::max(worst, std::fabs((*this)(i, j, k) + (*this)(j, i, k)));
  return worst;
}

double StructureConstants::jacobi_defect() const {
  // sum_m c_ij^m c_mk^l + c_jk^m c_mi^l + c_ki^m c_mj^l = 0
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          double s = 0.0;
          for (int m = 0; m < dim; ++m)
            s += (*this)(i, j, m) * (*this)(m, k, l) + (*this)(j, k, m) * (*this)(m, i, l) +
                 (*this)(k, i, m) * (*this)(m, j, l);
          worst = std::max(worst, std::fabs(s));
        }
  return worst;
}

StructureConstants structure_constants(const std::vector<VectorField>& basis, Interval window, double tol,
                                       int samples) {
  const int d = static_cast<int>(basis.size());
  if (d == 0) throw InvariantError("structure constants of an empty basis");
  samples = std::max(samples, 2);
  const int rows = 4 * samples;
  auto components = [&](const VectorField& v) {
    Eigen::VectorXd out(rows);
    for (int s = 0; s < samples; ++s) {
      const auto c = v.at(window.sample(s, samples));
      out.segment<4>(4 * s) << c.tau, c.a, c.b, c.c;
    }
    return out;
  };
  Eigen::MatrixXd B(rows, d);
  for (int i = 0; i < d; ++i) B.col(i) = components(basis[static_cast<std::size_t>(i)]);
  const auto qr = B.colPivHouseholderQr();
  if (qr.rank() < d) throw InvariantError("basis fields are linearly dependent");

  StructureConstants sc;
  sc.dim = d;
  sc.c.assign(static_cast<std::size_t>(d * d * d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Eigen::VectorXd y =
          components(bracket(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]));
      const Eigen::VectorXd x = qr.solve(y);
      const double res = (B * x - y).norm() / (1.0 + y.norm());
      sc.closure_residual = std::max(sc.closure_residual, res);
      if (res > tol)
        throw InvariantError("basis is not closed under the bracket: [e" + std::to_string(i + 1) + ",e" +
                             std::to_string(j + 1) + "] leaves the span (residual " + sci12(res) + ")");
      for (int k = 0; k < d; ++k) {
        // Snap roundoff so that exact algebras print exactly.
        double v = x[k];
        if (std::fabs(v) <= tol * (1.0 + x.cwiseAbs().maxCoeff())) v = 0.0;
        sc(i, j, k) = v;
        sc(j, i, k) = -v;
      }
    }
  return sc;
}

std::string AlgebraType::display() const {
  if (a) return label + "^" + shortest(*a);
  return label;
}

AlgebraType identify_algebra(const StructureConstants& s, double tol) {
  AlgebraType out;
  double biggest = 0.0;
  for (double v : s.c) biggest = std::max(biggest, std::fabs(v));
  const double eps = tol * (1.0 + biggest);
  if (s.dim == 1) {
    out.label = "A1";
    return out;
  }
  if (s.dim == 2) {
    out.label = biggest <= eps ? "2A1" : "A2";
    return out;
  }
  if (s.dim != 3) {
    out.label = "UNKNOWN";
    out.detail = "dimension " + std::to_string(s.dim) + " is not supported";
    return out;
  }
  if (biggest <= eps) {
    out.label = "3A1";
    return out;
  }
  const Vec3 E[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  Eigen::Matrix3d D;
  D.col(0) = lie(s, E[0], E[1]);
  D.col(1) = lie(s, E[1], E[2]);
  D.col(2) = lie(s, E[0], E[2]);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(D, Eigen::ComputeFullU);
  const Vec3 sv = svd.singularValues();
  const int rank = (sv.array() > eps).count();
  auto unknown = [&](const std::string& why) {
    out.label = "UNKNOWN";
    out.detail = why + ": " + bracket_table(s);
    return out;
  };
  if (rank == 1) {
    const Vec3 z = svd.matrixU().col(0);
    bool central = true;
    for (const Vec3& e : E) central = central && lie(s, z, e).norm() <= eps;
    out.label = central ? "A3.1" : "A2+A1";
    return out;
  }
  if (rank == 3) return unknown("derived algebra is the whole algebra");

  const Vec3 u1 = svd.matrixU().col(0), u2 = svd.matrixU().col(1), w = svd.matrixU().col(2);
  if (lie(s, u1, u2).norm() > eps) return unknown("derived algebra is not abelian");
  Eigen::Matrix<double, 3, 2> U;
  U << u1, u2;
  Eigen::Matrix2d M;
  M.col(0) = U.colPivHouseholderQr().solve(lie(s, u1, w));
  M.col(1) = U.colPivHouseholderQr().solve(lie(s, u2, w));
  // Eigenvalues from trace and determinant, so that a defective (Jordan)
  // action is recognised as a double eigenvalue rather than a split pair.
  const double tr = M.trace(), det = M.determinant();
  const double disc = tr * tr - 4.0 * det;
  const double disc_tol = eps * (1.0 + tr * tr);
  if (disc < -disc_tol) return unknown("ad action with complex eigenvalues");
  const double root = disc > disc_tol ? std::sqrt(disc) : 0.0;
  double l1 = 0.5 * (tr + root), l2 = 0.5 * (tr - root);
  if (std::fabs(l1) < std::fabs(l2)) std::swap(l1, l2);
  const double a = l2 / l1;
  if (std::fabs(a - 1.0) <= tol) {
    const Eigen::Matrix2d rest = M - l1 * Eigen::Matrix2d::Identity();
    out.label = rest.norm() <= eps ? "A3.3" : "A3.2";
    return out;
  }
  if (std::fabs(a + 1.0) <= tol) {
    out.label = "A3.4";
    return out;
  }
  out.label = "A3.5";
  out.a = a;
  return out;
}

std::string Subalgebra::display() const {
  std::string s = name;
  if (param) s += "(" + shortest(*param) + ")";
  s += " = <";
  for (std::size_t i = 0; i < basis.size(); ++i) s += (i ? ", " : "") + basis[i].describe();
  return s + ">";
}

Subalgebra SubalgebraFamily::instantiate(double p) const {
  std::optional<double> param_value;
  if (param != ParamKind::None) param_value = p;
  return named_subalgebra(cls, n, name, param_value);
}

std::vector<Subalgebra> SubalgebraFamily::members() const {
  if (param == ParamKind::Sign) return {instantiate(-1.0), instantiate(0.0), instantiate(1.0)};
  return {instantiate(0.0)};
}

std::vector<SubalgebraFamily> optimal_system(const ClassificationResult& c, double n) {
  auto fam = [&](const char* name, ParamKind k) { return SubalgebraFamily{name, k, c, n}; };
  switch (c.kind) {
    case Case::Generic:
      throw InvariantError("GENERIC case: only the kernel <d_x> exists and it yields constant solutions only");
    case Case::Power:
      if (std::fabs(c.rho + 1.0) <= kRhoTol) return {fam("g0", ParamKind::None), fam("g2.2", ParamKind::Real)};
      return {fam("g0", ParamKind::None), fam("g2.1", ParamKind::None)};
    case Case::Exponential: return {fam("g0", ParamKind::None), fam("g3", ParamKind::None)};
    case Case::Constant:
      return {fam("g0", ParamKind::None), fam("g4.1", ParamKind::Sign), fam("g4.2", ParamKind::None)};
  }
  return {};
}

Subalgebra stationary_subalgebra(double n) {
  return {"g4.stationary",
          {VectorField::d_t(), VectorField::affine({0.0, 5 * n, n, 0.0, -4.0}, "5nt d_t + nx d_x - 4u d_u")},
          std::nullopt};
}

Subalgebra named_subalgebra(const ClassificationResult& c, double n, const std::string& name,
                            std::optional<double> param) {
  if (name == "g4.stationary") {
    if (c.kind != Case::Constant) throw InvariantError("g4.stationary exists only in the CONSTANT case");
    return stationary_subalgebra(n);
  }
  ParamKind kind = ParamKind::None;
  bool found = false;
  for (const SubalgebraFamily& f : optimal_system(c, n))
    if (f.name == name) {
      kind = f.param;
      found = true;
    }
  if (!found) {
    std::string names;
    for (const SubalgebraFamily& f : optimal_system(c, n)) names += (names.empty() ? "" : ", ") + f.name;
    throw InvariantError("subalgebra " + name + " is not in the optimal system of the " + case_name(c.kind) +
                         " case (" + names + ")");
  }
  if (kind == ParamKind::None && param) throw InvariantError("subalgebra " + name + " takes no parameter");
  if (kind != ParamKind::None && !param) throw InvariantError("subalgebra " + name + " needs a parameter");
  if (kind == ParamKind::Sign && *param != -1.0 && *param != 0.0 && *param != 1.0)
    throw InvariantError("sigma must be -1, 0 or 1");

  Subalgebra s{name, {}, param};
  if (name == "g0") {
    s.basis.push_back(VectorField::d_x());
  } else if (name == "g2.1") {
    s.basis.push_back(VectorField::affine({0.0, 5 * n, (c.rho + 1) * n, 0.0, c.rho - 4}, name));
  } else if (name == "g2.2") {
    s.basis.push_back(VectorField::affine({0.0, n, 0.0, *param, -1.0}, name));
  } else if (name == "g3") {
    s.basis.push_back(VectorField::affine({5 * n, 0.0, n, 0.0, 1.0}, name));
  } else if (name == "g4.1") {
    s.basis.push_back(VectorField::affine({1.0, 0.0, 0.0, *param, 0.0}, name));
  } else if (name == "g4.2") {
    s.basis.push_back(VectorField::affine({0.0, 5 * n, n, 0.0, -4.0}, name));
  }
  return s;
}

}  // namespace fkdv

#include <cmath>

#include "doctest.h"
#include "fkdv/algebra.hpp"
#include "fkdv/error.hpp"

using namespace fkdv;

namespace {

ClassificationResult cls(double n, const char* alpha, const char* beta) {
  return classify(EquationSpec::make(n, Function(parse(alpha)), Function(parse(beta)), {1, 2}));
}

StructureConstants table(int dim, std::initializer_list<std::tuple<int, int, int, double>> entries) {
  StructureConstants s;
  s.dim = dim;
  s.c.assign(static_cast<std::size_t>(dim * dim * dim), 0.0);
  for (auto [i, j, k, v] : entries) {
    s(i, j, k) = v;
    s(j, i, k) = -v;
  }
  return s;
}

void check_close(const VectorField& v, const AffineGenerator& g) {
  for (double t : {1.0, 1.5, 2.0}) {
    const auto c = v.at(t);
    CHECK(c.tau == doctest::Approx(g.tau0 + g.tau1 * t));
    CHECK(c.a == doctest::Approx(g.a));
    CHECK(c.b == doctest::Approx(g.b));
    CHECK(c.c == doctest::Approx(g.c));
  }
}

}  // namespace

TEST_CASE("brackets of affine generators") {
  const double n = 2;
  const VectorField dt = VectorField::d_t(), dx = VectorField::d_x();
  const VectorField scale = VectorField::affine({0, 5 * n, n, 0, -4});
  // [d_t, 5nt d_t + n x d_x - 4u d_u] = 5n d_t,  [d_x, .] = n d_x
  check_close(bracket(dt, scale), {5 * n, 0, 0, 0, 0});
  check_close(bracket(dx, scale), {0, 0, 0, n, 0});
  check_close(bracket(dt, dx), {0, 0, 0, 0, 0});
  // Antisymmetry on a pair with t-dependent tau.
  const VectorField p = VectorField::affine({1, 2, 0.5, 1, 3}), q = VectorField::affine({0, 1, 2, -1, 0});
  const VectorField pq = bracket(p, q), qp = bracket(q, p);
  for (double t : {1.0, 2.0}) CHECK(pq.at(t).tau == doctest::Approx(-qp.at(t).tau));
}

TEST_CASE("structure of the maximal algebras") {
  SUBCASE("Case 2, rho = -1: 2A1") {
    const auto c = cls(2, "0", "1/t");
    const auto s = structure_constants(symmetry_basis(c, 2));
    CHECK(identify_algebra(s).label == "2A1");
  }
  SUBCASE("Case 2, rho != -1: A2") {
    for (const char* beta : {"t^2", "-t^(-3)", "t^0.5"}) {
      const auto c = cls(2, "0", beta);
      CHECK(identify_algebra(structure_constants(symmetry_basis(c, 2))).label == "A2");
    }
  }
  SUBCASE("Case 3: A2") {
    const auto c = cls(3, "0", "exp(t)");
    CHECK(identify_algebra(structure_constants(symmetry_basis(c, 3))).label == "A2");
  }
  SUBCASE("Case 4: A3.5 with a = 1/5 for every n") {
    for (double n : {2.0, 3.0, 0.5, -1.5}) {
      const auto c = classify(EquationSpec::make(n, Function(), Function(-1.0), {1, 2}));
      const auto s = structure_constants(symmetry_basis(c, n));
      const AlgebraType a = identify_algebra(s);
      CHECK(a.label == "A3.5");
      REQUIRE(a.a.has_value());
      CHECK(std::fabs(*a.a - 0.2) <= 1e-12);
      CHECK(s.antisymmetry_defect() <= 1e-12);
      CHECK(s.jacobi_defect() <= 1e-12);
    }
  }
  SUBCASE("original variables with alpha give the same algebra") {
    const Function alpha(parse("sin(t)+2"));
    const Interval img = gauge_time_map(alpha, 2, {1, 2}).image({1, 2});
    const EquationSpec gauged = EquationSpec::make(2, Function(), Function(parse("exp(t)")), img);
    const EquationSpec e = attach_alpha(gauged, alpha, {1, 2});
    const auto c = classify(e);
    REQUIRE(c.kind != Case::Generic);
    const auto basis = symmetry_basis_original(e, c);
    const auto s = structure_constants(basis, e.interval, 1e-9);
    const auto canonical = structure_constants(symmetry_basis(c, 2));
    CHECK(identify_algebra(s, 1e-8).label == identify_algebra(canonical).label);
    for (std::size_t k = 0; k < s.c.size(); ++k) CHECK(s.c[k] == doctest::Approx(canonical.c[k]).scale(1.0).epsilon(1e-8));
  }
}

TEST_CASE("identification of hand-written tables") {
  CHECK(identify_algebra(table(3, {})).label == "3A1");
  CHECK(identify_algebra(table(3, {{1, 2, 0, 1.0}})).label == "A3.1");
  CHECK(identify_algebra(table(3, {{0, 1, 0, 1.0}})).label == "A2+A1");
  CHECK(identify_algebra(table(3, {{0, 2, 0, 1.0}, {1, 2, 1, 1.0}})).label == "A3.3");
  CHECK(identify_algebra(table(3, {{0, 2, 0, 1.0}, {1, 2, 0, 1.0}, {1, 2, 1, 1.0}})).label == "A3.2");
  CHECK(identify_algebra(table(3, {{0, 2, 0, 1.0}, {1, 2, 1, -1.0}})).label == "A3.4");
  // Scaling the table (rescaled e3) keeps the ratio.
  const AlgebraType a = identify_algebra(table(3, {{0, 2, 0, 4.0}, {1, 2, 1, 2.0}}));
  CHECK(a.label == "A3.5");
  CHECK(*a.a == doctest::Approx(0.5));
  CHECK(a.display() == "A3.5^0.5");
  // so(3) is not solvable.
  const AlgebraType so3 = identify_algebra(table(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}}));
  CHECK(so3.label == "UNKNOWN");
  CHECK(!so3.detail.empty());
  CHECK(identify_algebra(table(2, {{0, 1, 0, 1.0}})).label == "A2");
  CHECK(identify_algebra(table(4, {})).label == "UNKNOWN");
}

TEST_CASE("defects of a broken table") {
  auto s = table(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 2.0}});
  CHECK(s.antisymmetry_defect() == 0.0);
  s(0, 1, 2) = 3.0;  // breaks antisymmetry
  CHECK(s.antisymmetry_defect() > 1.0);
  // [e1,e2]=e1 and [e1,e3]=e2 with everything else zero fails Jacobi.
  const auto j = table(3, {{0, 1, 0, 1.0}, {0, 2, 1, 1.0}, {1, 2, 1, 5.0}});
  CHECK(j.jacobi_defect() > 1e-3);
}

TEST_CASE("non-closed spans are rejected") {
  // [d_t, t^2 d_x] = 2t d_x is not in the span.
  const VectorField a = VectorField::d_t();
  VectorField b = VectorField::affine({0, 0, 0, 0, 0});
  b.xi_0 = Function(pow(Expr::variable(), 2.0));
  CHECK_THROWS_AS(structure_constants({a, b}), InvariantError);
}

TEST_CASE("optimal systems") {
  const auto names = [](const std::vector<SubalgebraFamily>& fams) {
    std::vector<std::string> out;
    for (const auto& f : fams) out.push_back(f.name);
    return out;
  };
  CHECK(names(optimal_system(cls(2, "0", "t^2"), 2)) == std::vector<std::string>{"g0", "g2.1"});
  CHECK(names(optimal_system(cls(2, "0", "1/t"), 2)) == std::vector<std::string>{"g0", "g2.2"});
  CHECK(names(optimal_system(cls(2, "0", "exp(t)"), 2)) == std::vector<std::string>{"g0", "g3"});
  const auto four = optimal_system(cls(2, "0", "1"), 2);
  CHECK(names(four) == std::vector<std::string>{"g0", "g4.1", "g4.2"});
  CHECK(four[1].param == ParamKind::Sign);
  CHECK(four[1].members().size() == 3);
  CHECK_THROWS_AS(optimal_system(cls(2, "0", "1+t^2+sin(t)"), 2), InvariantError);
}

TEST_CASE("named subalgebras") {
  const auto k = cls(3, "0", "1");
  const Subalgebra g41 = named_subalgebra(k, 3, "g4.1", -1.0);
  REQUIRE(g41.basis.size() == 1);
  check_close(g41.basis[0], {1, 0, 0, -1, 0});
  check_close(named_subalgebra(k, 3, "g4.2").basis[0], {0, 15, 3, 0, -4});
  CHECK_THROWS_AS(named_subalgebra(k, 3, "g4.1", 2.0), InvariantError);
  CHECK_THROWS_AS(named_subalgebra(k, 3, "g4.1"), InvariantError);
  CHECK_THROWS_AS(named_subalgebra(k, 3, "g3"), InvariantError);
  CHECK_THROWS_AS(named_subalgebra(k, 3, "g9"), InvariantError);

  const auto r = cls(2, "0", "1/t");
  check_close(named_subalgebra(r, 2, "g2.2", 0.7).basis[0], {0, 2, 0, 0.7, -1});
  CHECK_THROWS_AS(named_subalgebra(cls(2, "0", "t^2"), 2, "g2.2", 0.7), InvariantError);
  check_close(named_subalgebra(cls(2, "0", "t^2"), 2, "g2.1").basis[0], {0, 10, 6, 0, -2});

  const Subalgebra st = stationary_subalgebra(2);
  REQUIRE(st.basis.size() == 2);
  CHECK(identify_algebra(structure_constants(st.basis)).label == "A2");
}

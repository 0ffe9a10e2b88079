#include <doctest.h>

#include "chol/error.hpp"
#include "chol/poly.hpp"
#include "chol/rng.hpp"
#include "test_support.hpp"

using namespace chol;
using chol::testing::P;

namespace {

const std::vector<std::string> xyz{"x", "y", "z"};
const std::vector<std::string> xyzw{"x", "y", "z", "w"};

Polynomial random_poly(Rng& rng, std::size_t nvars, unsigned max_degree, int terms) {
  Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    std::vector<Monomial::Exponent> exps(nvars, 0);
    const int degree = rng.uniform_int(0, static_cast<int>(max_degree));
    for (int d = 0; d < degree; ++d) ++exps[rng.uniform_int(0, static_cast<int>(nvars) - 1)];
    const GaussianRational c(mpq_class(rng.uniform_int(-5, 5), rng.uniform_int(1, 3)),
                             mpq_class(rng.uniform_int(-1, 1)));
    p += Polynomial::monomial(Monomial(exps), c);
  }
  return p;
}

}  // namespace

TEST_CASE("add merges like terms and cancels") {
  CHECK((P("x", xyz) + P("-x", xyz)).is_zero());
  CHECK(add(P("x + y", xyz), P("y", xyz)) == P("x + 2*y", xyz));
  CHECK(add(P("x*z - y^2", xyz), P("y^2", xyz)) == P("x*z", xyz));
  CHECK_THROWS_AS(add(P("x", xyz), P("x", xyzw)), Error);
}

TEST_CASE("mul expands products") {
  CHECK(mul(P("x + y", xyz), P("x + y", xyz)) == P("x^2 + 2*x*y + y^2", xyz));
  CHECK(mul(P("x", xyz), P("x*z - y^2", xyz)) == P("x^2*z - x*y^2", xyz));

  // Table 2 entry x (xw - yz), built term by term.
  Polynomial expected(4);
  expected += Polynomial::monomial(Monomial({2, 0, 0, 1}), 1);
  expected += Polynomial::monomial(Monomial({1, 1, 1, 0}), -1);
  CHECK(mul(P("x", xyzw), P("x*w - y*z", xyzw)) == expected);
  CHECK(mul(P("x", xyzw), P("x*w - y*z", xyzw)).degree() == 3);
}

TEST_CASE("text form lists terms from the leading monomial down") {
  CHECK(P("x*(x*w - y*z)", xyzw).to_string(xyzw) == "x^2*w - x*y*z");
  CHECK(P("-y^2 + x*z", xyz).to_string(xyz) == "x*z - y^2");
  CHECK(P("3/2*x - 1", xyz).to_string(xyz) == "3/2*x - 1");
  CHECK(P("(1 + 2*i)*x", xyz).to_string(xyz) == "(1+2*i)*x");
  CHECK(Polynomial(3).to_string(xyz) == "0");
  const std::vector<PolyFactor> factors{{P("x", xyzw), 2}, {P("x*w - y*z", xyzw), 1}};
  CHECK(factored_string(factors, xyzw) == "x^2*(x*w - y*z)");
}

TEST_CASE("parse reports the offending position") {
  try {
    parse_polynomial("x + $", xyz);
    FAIL("expected MalformedInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedInput);
    REQUIRE(e.indices().size() == 1);
    CHECK(e.indices()[0] == 4);
  }
  CHECK_THROWS_AS(parse_polynomial("x + q", xyz), Error);
  CHECK_THROWS_AS(parse_polynomial("(x + y", xyz), Error);
}

TEST_CASE("det_poly on small grids") {
  PolyGrid sym{{P("x", xyz), P("y", xyz)}, {P("y", xyz), P("z", xyz)}};
  CHECK(det_poly(sym) == P("x*z - y^2", xyz));

  PolyGrid id(3, std::vector<Polynomial>(3, Polynomial(3)));
  for (int i = 0; i < 3; ++i) id[i][i] = Polynomial::constant(3, 1);
  CHECK(det_poly(id) == Polynomial::constant(3, 1));
}

TEST_CASE("det_poly of the B2 x N2 coefficient matrix") {
  // Columns are the vector fields of E11, E21, E22 acting on the left and
  // -A E12 on the right, written out by hand in the chart (x, y, z, w).
  const Polynomial zero(4);
  auto v = [&](const char* s) { return P(s, xyzw); };
  PolyGrid grid{{v("x"), zero, zero, zero},
                {v("y"), zero, zero, v("-x")},
                {zero, v("x"), v("z"), zero},
                {zero, v("y"), v("w"), v("-z")}};
  const Polynomial oracle = chol::testing::leibniz_det(grid);
  CHECK(oracle == P("-x^2*(x*w - y*z)", xyzw));
  CHECK(det_poly(grid) == oracle);
}

TEST_CASE("det_poly agrees with Leibniz expansion on random grids") {
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    PolyGrid grid(n, std::vector<Polynomial>(n));
    for (auto& row : grid) {
      for (auto& e : row) e = random_poly(rng, 3, 1, 2);
    }
    CHECK(det_poly(grid) == chol::testing::leibniz_det(grid));
  }
}

TEST_CASE("det_poly refuses grids above capacity") {
  PolyGrid big(13, std::vector<Polynomial>(13, Polynomial(1)));
  try {
    det_poly(big);
    FAIL("expected CapacityExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CapacityExceeded);
  }
  PolyGrid ragged{{Polynomial(1), Polynomial(1)}, {Polynomial(1)}};
  CHECK_THROWS_AS(det_poly(ragged), Error);
}

TEST_CASE("pfaffian_poly of the Sk_4 chart") {
  const std::vector<std::string> names{"x", "y", "z", "u", "v", "w"};
  auto v = [&](const char* s) { return P(s, names); };
  const Polynomial zero(6);
  PolyGrid a{{zero, v("x"), v("y"), v("z")},
             {v("-x"), zero, v("u"), v("v")},
             {v("-y"), v("-u"), zero, v("w")},
             {v("-z"), v("-v"), v("-w"), zero}};
  const Polynomial pf = pfaffian_poly(a);
  CHECK(pf == v("x*w - y*v + z*u"));
  CHECK(pow(pf, 2) == chol::testing::leibniz_det(a));
}

TEST_CASE("try_divide") {
  CHECK(*try_divide(P("x^2*(x*w - y*z)", xyzw), P("x", xyzw)) == P("x*(x*w - y*z)", xyzw));
  CHECK_FALSE(try_divide(P("x*z - y^2", xyz), P("x", xyz)).has_value());
  CHECK(*try_divide(P("x*(x*z - y^2)", xyz), P("x*z - y^2", xyz)) == P("x", xyz));
  CHECK(try_divide(Polynomial(3), P("x", xyz))->is_zero());
  try {
    try_divide(P("x", xyz), Polynomial(3));
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
  CHECK(equal_up_to_constant(P("-4*x*(x*z - y^2)", xyz), P("x^2*z - x*y^2", xyz)));
  CHECK_FALSE(equal_up_to_constant(P("x^2", xyz), P("x", xyz)));
}

TEST_CASE("eval") {
  const std::vector<cplx> p1{1.0, 0.0, 1.0};
  CHECK(eval(P("x*z - y^2", xyz), p1) == cplx(1.0));
  const std::vector<cplx> p2{cplx(3, 4), 0.0, 0.0};
  CHECK(eval(P("x", xyz), p2) == cplx(3, 4));
  const std::vector<cplx> p3{1.0, 2.0, 3.0, 10.0};
  CHECK(eval(P("x*(x*w - y*z)", xyzw), p3) == cplx(4.0));
  CHECK_THROWS_AS(eval(P("x", xyz), p3), Error);
}

TEST_CASE("grad") {
  auto g = grad(P("x*z - y^2", xyz));
  CHECK(g[0] == P("z", xyz));
  CHECK(g[1] == P("-2*y", xyz));
  CHECK(g[2] == P("x", xyz));
  for (const auto& c : grad(P("7", xyz))) CHECK(c.is_zero());
  g = grad(P("x^2*z", xyz));
  CHECK(g[0] == P("2*x*z", xyz));
  CHECK(g[1].is_zero());
  CHECK(g[2] == P("x^2", xyz));
}

TEST_CASE("ring axioms hold on random polynomials") {
  Rng rng = Rng(kDefaultSeed).split("ring-axioms");
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial a = random_poly(rng, 3, 3, 5);
    const Polynomial b = random_poly(rng, 3, 3, 5);
    const Polynomial c = random_poly(rng, 3, 3, 5);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("try_divide inverts mul") {
  Rng rng = Rng(kDefaultSeed).split("divide");
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial d = random_poly(rng, 4, 3, 4);
    const Polynomial q = random_poly(rng, 4, 3, 4);
    if (d.is_zero()) continue;
    const Polynomial p = d * q;
    auto quotient = try_divide(p, d);
    REQUIRE(quotient.has_value());
    CHECK(*quotient == q);
    CHECK(mul(d, *quotient) == p);
  }
}

TEST_CASE("compiled evaluation and gradient match finite differences") {
  Rng rng = Rng(kDefaultSeed).split("grad-fd");
  for (int trial = 0; trial < 40; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4, 6);
    std::vector<cplx> v{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
    const auto g = grad(p);
    const CompiledPolynomial compiled(p);
    std::vector<cplx> cg(3);
    const cplx value = compiled.value_and_gradient(v, cg);
    CHECK(std::abs(value - eval(p, v)) <= 1e-12 * (1.0 + std::abs(value)));
    const double h = 1e-5;
    for (std::size_t i = 0; i < 3; ++i) {
      auto plus = v;
      auto minus = v;
      plus[i] += h;
      minus[i] -= h;
      const cplx fd = (eval(p, plus) - eval(p, minus)) / (2.0 * h);
      const cplx exact = eval(g[i], v);
      CHECK(std::abs(fd - exact) <= 1e-6 * (1.0 + std::abs(exact)));
      CHECK(std::abs(cg[i] - exact) <= 1e-12 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("homogeneity and degree bookkeeping") {
  CHECK(P("x*z - y^2", xyz).is_homogeneous());
  CHECK_FALSE(P("x + y^2", xyz).is_homogeneous());
  CHECK(P("x*z - y^2", xyz).degree() == 2);
  CHECK(P("5", xyz).is_constant());
}

#include <doctest.h>

#include "chol/error.hpp"
#include "chol/factor.hpp"
#include "chol/invariants.hpp"
#include "test_support.hpp"

using namespace chol;
using chol::testing::cm;
using chol::testing::P;

namespace {

const std::vector<std::string> xyz{"x", "y", "z"};
const std::vector<std::string> xyzw{"x", "y", "z", "w"};

int expected_rank(Family f, int m) {
  switch (f) {
    case Family::CholeskySym:
    case Family::LU: return m;
    case Family::CholeskySkew: return m / 2;
    case Family::ModifiedLU: return 2 * m - 1;
    case Family::ModifiedRect: return 2 * m - 2;
  }
  return -1;
}

}  // namespace

TEST_CASE("basic invariants of the small cases") {
  Rng rng(kDefaultSeed);
  const auto sym = basic_invariants(build_representation(Family::CholeskySym, 2), rng);
  REQUIRE(sym.size() == 2);
  CHECK(sym[0].f == P("x", xyz));
  CHECK(sym[1].f == P("x*z - y^2", xyz));

  const auto mlu = basic_invariants(build_representation(Family::ModifiedLU, 2), rng);
  REQUIRE(mlu.size() == 3);
  CHECK(mlu[0].f == P("x", xyzw));
  CHECK(mlu[1].f == P("x*w - y*z", xyzw));
  CHECK(mlu[2].f == P("y", xyzw));

  const Representation sym3 = build_representation(Family::CholeskySym, 3);
  const auto s3 = basic_invariants(sym3, rng);
  REQUIRE(s3.size() == 3);
  const auto& names = sym3.space.variable_names();
  CHECK(s3[1].f == parse_polynomial("x*w - y^2", names));
  CHECK(s3[2].f == det_poly(sym3.space.symbolic_matrix()));
}

TEST_CASE("invariant count equals the group rank") {
  Rng rng(kDefaultSeed);
  for (Family f : kAllFamilies) {
    for (int m = std::max(2, min_size(f)); m <= 5; ++m) {
      const Representation rep = build_representation(f, m);
      CAPTURE(to_string(f));
      CAPTURE(m);
      CHECK(rep.rank() == expected_rank(f, m));
      CHECK(static_cast<int>(defining_polynomials(f, m).size()) == rep.rank());
    }
  }
}

TEST_CASE("relative invariance") {
  Rng rng = Rng(kDefaultSeed).split("invariance");
  const Representation sym2 = build_representation(Family::CholeskySym, 2);

  // f = x under diagonal g scales by b1^2.
  const GroupElement g = GroupElement::make(Family::CholeskySym, 2, cm({{3.0, 0.0}, {0.0, 5.0}}));
  const CMatrix a = cm({{1.0, 2.0}, {2.0, 7.0}});
  CHECK(std::abs(act(g, a)(0, 0) - 9.0 * a(0, 0)) < 1e-12);

  const InvarianceReport det_report =
      verify_relative_invariance(sym2, P("x*z - y^2", xyz), 5, rng);
  CHECK(det_report.ratios.size() == 5);

  try {
    verify_relative_invariance(sym2, P("x + z", xyz), 5, rng);
    FAIL("expected InvarianceViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvarianceViolated);
  }

  // det A on Sym_3 transforms by det(g)^2.
  const Representation sym3 = build_representation(Family::CholeskySym, 3);
  const Polynomial det = det_poly(sym3.space.symbolic_matrix());
  Rng fixed(9);
  const GroupElement h = random_group_element(Family::CholeskySym, 3, fixed);
  const Point v = random_point(sym3.space, fixed);
  const auto coords = chol::testing::to_vector(v.coords);
  const auto moved = chol::testing::to_vector(act(h, v).coords);
  const cplx ratio = eval(det, moved) / eval(det, coords);
  const cplx expected = h.left().determinant() * h.left().determinant();
  CHECK(std::abs(ratio - expected) < 1e-9 * std::abs(expected));
}

TEST_CASE("infinitesimal characters") {
  Rng rng(kDefaultSeed);
  const Representation sym2 = build_representation(Family::CholeskySym, 2);
  const CVector l1 = infinitesimal_character(sym2, P("x", xyz), rng);
  const CVector l2 = infinitesimal_character(sym2, P("x*z - y^2", xyz), rng);
  CHECK(std::abs(l1[0] - 2.0) < 1e-10);
  CHECK(std::abs(l1[1]) < 1e-10);
  CHECK(std::abs(l2[0] - 2.0) < 1e-10);
  CHECK(std::abs(l2[1] - 2.0) < 1e-10);
  CHECK_THROWS_AS(infinitesimal_character(sym2, P("x + z", xyz), rng), Error);

  const CVector lu = infinitesimal_character(build_representation(Family::LU, 2),
                                             P("x*w - y*z", xyzw), rng);
  CHECK(std::abs(lu[0] - 1.0) < 1e-10);
  CHECK(std::abs(lu[1] - 1.0) < 1e-10);
}

TEST_CASE("Lambda matrices") {
  Rng rng(kDefaultSeed);
  const LambdaMatrix sym2 = lambda_matrix(build_representation(Family::CholeskySym, 2), rng);
  Eigen::MatrixXi expected(2, 2);
  expected << 2, 0, 2, 2;
  CHECK(sym2.entries == expected);

  const LambdaMatrix sym3 = lambda_matrix(build_representation(Family::CholeskySym, 3), rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(sym3.entries(i, j) == (j <= i ? 2 : 0));
  }

  for (Family f : kAllFamilies) {
    for (int m = min_size(f); m <= 4; ++m) {
      const LambdaMatrix l = lambda_matrix(build_representation(f, m), rng);
      CAPTURE(to_string(f));
      CAPTURE(m);
      CHECK(l.entries.rows() == l.entries.cols());
      CHECK(l.integrality_residual < 1e-8);
      CHECK(std::abs(l.entries.cast<double>().determinant()) > 0.5);
    }
  }
}

TEST_CASE("torus loop integrals reproduce Lambda") {
  Rng rng(kDefaultSeed);
  const Representation sym2 = build_representation(Family::CholeskySym, 2);
  CHECK(std::abs(torus_loop_integral(sym2, 0, 0) - 2.0) < 1e-6);
  CHECK(std::abs(torus_loop_integral(sym2, 0, 1)) < 1e-6);
  CHECK_THROWS_AS(torus_loop_integral(sym2, 2, 0), Error);

  for (Family f : kAllFamilies) {
    for (int m = min_size(f); m <= 4; ++m) {
      const Representation rep = build_representation(f, m);
      const LambdaMatrix l = lambda_matrix(rep, rng);
      const CMatrix grid = torus_loop_grid(rep);
      CHECK((grid - l.raw).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("basic invariants are homogeneous") {
  Rng rng = Rng(kDefaultSeed).split("homogeneity");
  for (Family f : kAllFamilies) {
    const Representation rep = build_representation(f, 3);
    for (const auto& named : defining_polynomials(f, 3)) {
      CHECK(named.poly.is_homogeneous());
      const CVector v = random_point(rep.space, rng).coords;
      const cplx c = rng.complex_annulus(0.5, 2.0);
      const auto scaled = chol::testing::to_vector(c * v);
      const cplx lhs = eval(named.poly, scaled);
      const cplx rhs = std::pow(c, static_cast<int>(named.poly.degree())) *
                       eval(named.poly, chol::testing::to_vector(v));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    }
  }
}

TEST_CASE("fiber relation on every built-in representation") {
  Rng rng = Rng(kDefaultSeed).split("fiber");
  for (Family f : kAllFamilies) {
    for (int m = min_size(f); m <= 4; ++m) {
      const FiberReport r = fiber_relation_check(build_representation(f, m), 50, 10, rng);
      CAPTURE(to_string(f));
      CAPTURE(m);
      CHECK(r.points == 50);
      CHECK(r.max_residual <= kFiberTolerance);
      CHECK(r.control_failures == 0);
    }
  }
}

TEST_CASE("the structure matrix lies in the open orbit") {
  for (Family f : kAllFamilies) {
    for (int m = min_size(f); m <= 6; ++m) {
      const MatrixSpace space = MatrixSpace::for_family(f, m);
      const Point k = Point::from_matrix(space, structure_matrix(f, m));
      for (const cplx minor : minor_profile(k, f)) CHECK(std::abs(std::abs(minor) - 1.0) < 1e-12);
    }
  }
}

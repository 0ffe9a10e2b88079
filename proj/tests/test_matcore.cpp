#include <doctest.h>

#include "chol/error.hpp"
#include "chol/matcore.hpp"
#include "test_support.hpp"

using namespace chol;
using chol::testing::cm;

TEST_CASE("charts name the small spaces") {
  CHECK(MatrixSpace::sym(2).variable_names() == std::vector<std::string>{"x", "y", "z"});
  CHECK(MatrixSpace::gen(2, 2).variable_names() == std::vector<std::string>{"x", "y", "z", "w"});
  CHECK(MatrixSpace::skew(4).variable_names() ==
        std::vector<std::string>{"x", "y", "z", "u", "v", "w"});
  CHECK(MatrixSpace::sym(2).name() == "Sym_2");
  CHECK(MatrixSpace::gen(2, 3).name() == "M_{2,3}");
  CHECK(MatrixSpace::skew(4).name() == "Sk_4");
  CHECK(MatrixSpace::gen(3, 3).variable_names()[5] == "a23");
}

TEST_CASE("dimensions") {
  CHECK(MatrixSpace::sym(4).dim() == 10);
  CHECK(MatrixSpace::skew(5).dim() == 10);
  CHECK(MatrixSpace::gen(3, 4).dim() == 12);
  CHECK(MatrixSpace::for_family(Family::ModifiedRect, 3) == MatrixSpace::gen(2, 3));
}

TEST_CASE("materialize and encode round trip") {
  Rng rng(kDefaultSeed);
  for (const auto& space : {MatrixSpace::sym(3), MatrixSpace::skew(5), MatrixSpace::gen(2, 3)}) {
    const Point p = random_point(space, rng);
    const CMatrix a = p.matrix();
    CHECK(space.respects_symmetry(a));
    CHECK((space.encode(a) - p.coords).norm() == 0.0);
  }
  const CMatrix s = MatrixSpace::sym(2).materialize(CVector::LinSpaced(3, 1.0, 3.0));
  CHECK(s(1, 0) == cplx(2.0));
  CHECK_THROWS_AS(Point::from_matrix(MatrixSpace::sym(2), cm({{1.0, 2.0}, {0.0, 1.0}})), Error);
  CHECK_THROWS_AS(Point::from_matrix(MatrixSpace::skew(2), cm({{1.0, 2.0}, {-2.0, 0.0}})), Error);
}

TEST_CASE("leading minors and Pfaffians") {
  const CMatrix a = cm({{1.0, 2.0}, {3.0, 10.0}});
  CHECK(std::abs(leading_minor(a, 1) - 1.0) < 1e-14);
  CHECK(std::abs(leading_minor(a, 2) - 4.0) < 1e-14);
  CHECK_THROWS_AS(leading_minor(a, 0), Error);
  CHECK(hat(a).cols() == 1);

  CMatrix j = CMatrix::Zero(4, 4);
  j(0, 1) = 1.0; j(1, 0) = -1.0;
  j(2, 3) = 1.0; j(3, 2) = -1.0;
  CHECK(std::abs(pfaffian(j) - 1.0) < 1e-14);
  CHECK(std::abs(pfaffian(CMatrix::Zero(0, 0)) - 1.0) < 1e-14);

  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const CMatrix s = random_point(MatrixSpace::skew(6), rng).matrix();
    const cplx pf = pfaffian(s);
    CHECK(std::abs(pf * pf - s.determinant()) < 1e-9 * (1.0 + std::abs(s.determinant())));
  }
}

TEST_CASE("open orbit detection names the failing minor") {
  const Point bad = Point::from_matrix(MatrixSpace::sym(2), cm({{0.0, 1.0}, {1.0, 1.0}}));
  try {
    require_open_orbit(bad, Family::CholeskySym);
    FAIL("expected NotInOpenOrbit");
  } catch (const NotInOpenOrbit& e) {
    CHECK(e.family() == MinorFamily::Plain);
    CHECK(e.index() == 1);
    CHECK(e.kind() == ErrorKind::NotInOpenOrbit);
  }

  // Plain minors fine, hat(A)^(1) = 0.
  const Point hat_bad = Point::from_matrix(MatrixSpace::gen(2, 2), cm({{1.0, 0.0}, {1.0, 1.0}}));
  CHECK(in_open_orbit(hat_bad, Family::LU));
  try {
    require_open_orbit(hat_bad, Family::ModifiedLU);
    FAIL("expected NotInOpenOrbit");
  } catch (const NotInOpenOrbit& e) {
    CHECK(e.family() == MinorFamily::Hat);
    CHECK(e.index() == 1);
  }
  CHECK(defining_minors(Family::ModifiedLU, 3).size() == 5);
  CHECK(defining_minors(Family::ModifiedRect, 3).size() == 4);
  CHECK(defining_minors(Family::CholeskySkew, 5).size() == 2);
}

TEST_CASE("minor threshold scales with the matrix") {
  CHECK(minor_is_nonzero(1e-3, 1.0, 1));
  CHECK_FALSE(minor_is_nonzero(1e-11, 1.0, 1));
  CHECK_FALSE(minor_is_nonzero(1e-3, 1e8, 2));
}

TEST_CASE("size parameter rejects foreign spaces") {
  CHECK(size_parameter(Family::ModifiedRect, MatrixSpace::gen(2, 3)) == 3);
  CHECK(size_parameter(Family::CholeskySkew, MatrixSpace::skew(5)) == 5);
  CHECK_THROWS_AS(size_parameter(Family::CholeskySym, MatrixSpace::gen(2, 2)), Error);
  CHECK_THROWS_AS(size_parameter(Family::ModifiedLU, MatrixSpace::gen(2, 3)), Error);
  try {
    size_parameter(Family::LU, MatrixSpace::skew(2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IncompatibleGroup);
  }
}

TEST_CASE("group elements validate their shape") {
  CHECK_THROWS_AS(GroupElement::make(Family::CholeskySym, 2, cm({{1.0, 1.0}, {0.0, 1.0}})), Error);
  CHECK_THROWS_AS(GroupElement::make(Family::LU, 2, CMatrix::Identity(2, 2),
                                     cm({{2.0, 0.0}, {0.0, 1.0}})),
                  Error);
  // C_m has first row e_1.
  CHECK_THROWS_AS(GroupElement::make(Family::ModifiedLU, 2, CMatrix::Identity(2, 2),
                                     cm({{1.0, 1.0}, {0.0, 1.0}})),
                  Error);
  CHECK_NOTHROW(GroupElement::make(Family::ModifiedLU, 2, CMatrix::Identity(2, 2),
                                   cm({{1.0, 0.0}, {0.0, 3.0}})));
}

TEST_CASE("actions compose and preserve the space") {
  Rng rng(kDefaultSeed);
  for (Family f : kAllFamilies) {
    const int m = std::max(min_size(f), 4);
    const MatrixSpace space = MatrixSpace::for_family(f, m);
    const Point p = random_point(space, rng);
    const GroupElement g = random_group_element(f, m, rng);
    const GroupElement h = random_group_element(f, m, rng);
    const CMatrix lhs = act(g * h, p.matrix());
    const CMatrix rhs = act(g, act(h, p.matrix()));
    CHECK(chol::testing::max_abs_diff(lhs, rhs) < 1e-9 * (1.0 + norm_inf(lhs)));
    CHECK(space.respects_symmetry(act(g, p).matrix(), 1e-10));
    CHECK(chol::testing::max_abs_diff(act(GroupElement::identity(f, m), p.matrix()), p.matrix()) ==
          0.0);
  }
}

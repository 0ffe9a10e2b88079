#include <doctest.h>

#include "chol/error.hpp"
#include "chol/factor.hpp"
#include "test_support.hpp"

using namespace chol;
using chol::testing::cm;
using chol::testing::max_abs_diff;

namespace {

Point gen_point(const CMatrix& a) { return Point::from_matrix(MatrixSpace::gen(a.rows(), a.cols()), a); }

}  // namespace

TEST_CASE("complex Cholesky of a small symmetric matrix") {
  const Point a = Point::from_matrix(MatrixSpace::sym(2), cm({{4.0, 2.0}, {2.0, 2.0}}));
  const Factorization f = cholesky_sym(a);
  CHECK(max_abs_diff(f.B, cm({{2.0, 0.0}, {1.0, 1.0}})) < 1e-14);
  CHECK_FALSE(f.C.has_value());
  CHECK(f.residual < 1e-14);
}

TEST_CASE("complex Cholesky uses the principal root") {
  const Point a = Point::from_matrix(MatrixSpace::sym(1), cm({{-4.0}}));
  CHECK(std::abs(cholesky_sym(a).B(0, 0) - cplx(0.0, 2.0)) < 1e-14);
  CHECK(principal_sqrt(cplx(-1.0, -0.0)) == cplx(0.0, 1.0));
  CHECK(principal_sqrt(cplx(4.0, 0.0)) == cplx(2.0, 0.0));
}

TEST_CASE("LU with unit upper right factor") {
  const Factorization f = lu(gen_point(cm({{2.0, 1.0}, {4.0, 3.0}})));
  CHECK(max_abs_diff(f.B, cm({{2.0, 0.0}, {4.0, 1.0}})) < 1e-14);
  CHECK(max_abs_diff(*f.C, cm({{1.0, 0.5}, {0.0, 1.0}})) < 1e-14);
}

TEST_CASE("skew Cholesky of 4 J") {
  CMatrix j = structure_matrix(Family::CholeskySkew, 4);
  const Factorization f = cholesky_skew(Point::from_matrix(MatrixSpace::skew(4), 4.0 * j));
  CHECK(max_abs_diff(f.B, 2.0 * CMatrix::Identity(4, 4)) < 1e-14);
}

TEST_CASE("skew Cholesky in odd size") {
  Rng rng(11);
  const Point a = random_point(MatrixSpace::skew(5), rng);
  const Factorization f = cholesky_skew(a);
  CHECK(f.B(4, 4) == cplx(1.0));
  CHECK(has_group_shape(GroupKind::BlockD, f.B, 1e-12));
  CHECK(max_abs_diff(f.reconstruct(), a.matrix()) < 1e-10);
}

TEST_CASE("modified LU worked examples") {
  const Factorization f = modified_lu(gen_point(cm({{1.0, 2.0}, {3.0, 10.0}})));
  CHECK(max_abs_diff(f.B, cm({{1.0, 0.0}, {3.0, 2.0}})) < 1e-14);
  CHECK(max_abs_diff(*f.C, cm({{1.0, 0.0}, {0.0, 2.0}})) < 1e-14);
  CHECK(max_abs_diff(f.K, cm({{1.0, 1.0}, {0.0, 1.0}})) == 0.0);

  const Factorization r = modified_rect(gen_point(cm({{2.0, 6.0}})));
  CHECK(max_abs_diff(r.B, cm({{2.0}})) < 1e-14);
  CHECK(max_abs_diff(*r.C, cm({{1.0, 0.0}, {0.0, 3.0}})) < 1e-14);
  CHECK(max_abs_diff(r.K, cm({{1.0, 1.0}})) == 0.0);
}

TEST_CASE("points off the open orbit are rejected") {
  CHECK_THROWS_AS(lu(gen_point(cm({{0.0, 1.0}, {1.0, 0.0}}))), NotInOpenOrbit);
  CHECK_THROWS_AS(cholesky_skew(Point::from_matrix(MatrixSpace::skew(2), CMatrix::Zero(2, 2))),
                  NotInOpenOrbit);
  try {
    modified_lu(gen_point(cm({{1.0, 0.0}, {1.0, 1.0}})));
    FAIL("expected NotInOpenOrbit");
  } catch (const NotInOpenOrbit& e) {
    CHECK(e.family() == MinorFamily::Hat);
    CHECK(e.index() == 1);
  }
  CHECK_THROWS_AS(factor(gen_point(cm({{1.0, 2.0}, {3.0, 4.0}})), Family::CholeskySym), Error);
}

TEST_CASE("random round trips land in the right groups") {
  Rng rng = Rng(kDefaultSeed).split("factor-roundtrip");
  for (Family f : kAllFamilies) {
    for (int m = min_size(f); m <= 6; ++m) {
      const MatrixSpace space = MatrixSpace::for_family(f, m);
      for (int trial = 0; trial < 40; ++trial) {
        const Point a = random_point(space, rng);
        const Factorization fa = factor(a, f);
        CAPTURE(to_string(f));
        CAPTURE(m);
        CHECK(fa.residual <= 1e-10 * (1.0 + norm_inf(a.matrix())));
        const GroupElement g = fa.C ? GroupElement::make(f, m, fa.B, *fa.C)
                                    : GroupElement::make(f, m, fa.B);
        CHECK(g.size() == m);
      }
    }
  }
}

TEST_CASE("factorization is equivariant along the orbit") {
  Rng rng = Rng(kDefaultSeed).split("equivariance");
  for (Family f : kAllFamilies) {
    const int m = std::max(min_size(f), 3);
    const MatrixSpace space = MatrixSpace::for_family(f, m);
    const CMatrix k = structure_matrix(f, m);
    const GroupElement g = random_group_element(f, m, rng);
    const Point a = Point::from_matrix(space, act(g, k), 1e-10);
    const Factorization fa = factor(a, f);
    CHECK(max_abs_diff(fa.reconstruct(), a.matrix()) < 1e-9);
  }
}

#pragma once

#include <string>
#include <vector>

#include "chol/matcore.hpp"
#include "chol/poly.hpp"

namespace chol {

// Lie algebra element. Congruence actions use `left` only and act by
// X A + A X^T; left-right actions act by X A - A Y with (X, Y) = (left, right).
struct Generator {
  Eigen::MatrixXi left;
  Eigen::MatrixXi right;
  std::string label;
};

struct Representation {
  Family family;
  int m;
  MatrixSpace space;
  ActionType action;
  std::vector<Generator> generators;
  // Generator indices spanning the Lie algebra of a maximal torus.
  std::vector<int> torus;

  int rank() const { return static_cast<int>(torus.size()); }
};

// Generators are ordered: the left group's Lie algebra column by column,
// then the right group's. Throws ShapeMismatch if the generator count differs
// from the space dimension.
Representation build_representation(Family family, int m);

// Infinitesimal action of generator `index` at the matrix a.
CMatrix vector_field(const Representation& rep, int index, const CMatrix& a);

// exp(t * generator) as a group element.
GroupElement exp_generator(const Representation& rep, int index, cplx t);

// Rows are chart coordinates, columns generators; entry (i, j) is the i-th
// coordinate of the j-th vector field, a linear form.
struct CoefficientMatrix {
  PolyGrid entries;
  std::vector<std::string> row_names;
  std::vector<std::string> column_labels;
};

CoefficientMatrix coefficient_matrix(const Representation& rep);

struct NamedPolynomial {
  std::string label;
  Polynomial poly;
};

// The minors cutting out the exceptional orbit variety over the chart: plain
// leading minors then hat minors, smallest order first. For the skew family
// these are the leading Pfaffians.
std::vector<NamedPolynomial> defining_polynomials(Family family, int m);

enum class Verdict { Free, FreeStar };

std::string_view to_string(Verdict verdict);

struct ExceptionalFactored {
  Polynomial determinant;
  GaussianRational constant;
  std::vector<PolyFactor> factors;
  std::vector<std::string> labels;
  Verdict verdict;

  // Product of the distinct factors, each to the first power.
  Polynomial reduced() const;
};

// Divides the coefficient determinant by each defining polynomial as often
// as it goes. Throws ResidualNotConstant when a nonconstant quotient remains.
ExceptionalFactored exceptional_equation(const Representation& rep);

// W_1 ⊂ W_2 ⊂ ... ⊂ W_n = V, each a sorted list of coordinate slots.
using Filtration = std::vector<std::vector<int>>;

// Staircase of upper-left zero regions: W_j consists of the coordinates
// outside the (n - j)-th region.
Filtration shipped_filtration(const Representation& rep);

struct BlockReport {
  std::vector<int> block_sizes;  // top block first
  std::vector<int> generator_levels;
  std::vector<Polynomial> p;     // diagonal block determinants, top first
};

// Throws NotInvariant(j) or NotBlockTriangular(i, j), indices 1-based.
BlockReport verify_block_structure(const Representation& rep, const Filtration& filtration,
                                   Rng& rng);

}  // namespace chol

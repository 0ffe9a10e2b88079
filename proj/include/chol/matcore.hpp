#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chol/error.hpp"
#include "chol/poly.hpp"
#include "chol/rng.hpp"

namespace chol {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// The five factorization types. Each one fixes a matrix space, a solvable
// group, an action and a structure matrix:
//
//   CholeskySym   Sym_m      B_m            B A B^T
//   LU            M_{m,m}    B_m x N_m      B A C^-1
//   CholeskySkew  Sk_m       D_m            B A B^T
//   ModifiedLU    M_{m,m}    B_m x C_m      B A C^-1
//   ModifiedRect  M_{m-1,m}  B_{m-1} x C_m  B A C^-1
enum class Family { CholeskySym, LU, CholeskySkew, ModifiedLU, ModifiedRect };

inline constexpr Family kAllFamilies[] = {Family::CholeskySym, Family::LU, Family::CholeskySkew,
                                          Family::ModifiedLU, Family::ModifiedRect};

// Short CLI names: sym, lu, skew, mlu, mrect.
std::string_view to_string(Family family);
Family parse_family(std::string_view name);
// Smallest supported size parameter m.
int min_size(Family family);
bool is_modified(Family family);

enum class SpaceKind { Sym, Gen, Skew };

// One of the matrix spaces with a frozen coordinate chart. Free coordinates
// are enumerated row-major: the upper triangle with diagonal for Sym, the
// strict upper triangle for Skew, every entry for Gen.
class MatrixSpace {
 public:
  static MatrixSpace sym(int m);
  static MatrixSpace gen(int rows, int cols);
  static MatrixSpace skew(int m);
  static MatrixSpace for_family(Family family, int m);

  SpaceKind kind() const noexcept { return kind_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int dim() const noexcept { return static_cast<int>(slots_.size()); }

  // (row, col) of the entry holding coordinate `slot`.
  std::pair<int, int> slot_position(int slot) const { return slots_.at(slot); }
  // Coordinate slot of entry (i, j), or -1 when the entry is not free
  // (skew diagonal). Lower entries of Sym/Skew resolve to their mirror.
  int slot_of(int row, int col) const;

  CMatrix materialize(std::span<const cplx> coords) const;
  CMatrix materialize(const CVector& coords) const;
  CVector encode(const CMatrix& matrix) const;
  // Symmetric / skew-symmetric with zero diagonal, to `tol` relative.
  bool respects_symmetry(const CMatrix& matrix, double tol = 1e-12) const;

  // Chart names: x, y, z, ... for the small spaces used in the tables,
  // a<i><j> (1-based) otherwise.
  const std::vector<std::string>& variable_names() const noexcept { return names_; }
  std::string name() const;
  // Generic matrix with polynomial entries over this chart.
  PolyGrid symbolic_matrix() const;

  friend bool operator==(const MatrixSpace& a, const MatrixSpace& b) {
    return a.kind_ == b.kind_ && a.rows_ == b.rows_ && a.cols_ == b.cols_;
  }

 private:
  MatrixSpace(SpaceKind kind, int rows, int cols);

  SpaceKind kind_;
  int rows_;
  int cols_;
  std::vector<std::pair<int, int>> slots_;
  std::vector<std::string> names_;
};

struct Point {
  MatrixSpace space;
  CVector coords;

  CMatrix matrix() const { return space.materialize(coords); }
  // Validates the symmetry class before encoding.
  static Point from_matrix(const MatrixSpace& space, const CMatrix& matrix, double tol = 1e-12);
};

double norm_inf(const CMatrix& matrix);

// det of the upper-left k x k block (partial pivoting).
cplx leading_minor(const CMatrix& matrix, int k);
// Drops the first column.
CMatrix hat(const CMatrix& matrix);
// Pfaffian of an even skew-symmetric matrix (pivoted skew elimination).
cplx pfaffian(const CMatrix& matrix);

struct MinorSpec {
  MinorFamily family;
  int k;
};

// The defining minors of the open orbit, in reporting order: plain minors
// then hat minors, smallest k first. For CholeskySkew only even k appear.
std::vector<MinorSpec> defining_minors(Family family, int m);
std::vector<cplx> minor_profile(const Point& point, Family family);

inline constexpr double kMinorTolerance = 1e-10;

// Scale-aware nonvanishing test: |minor| > tol * (1 + |A|_inf^k).
bool minor_is_nonzero(cplx minor, double scale, int k, double tol = kMinorTolerance);

// Throws NotInOpenOrbit naming the first vanishing defining minor.
void require_open_orbit(const Point& point, Family family, double tol = kMinorTolerance);
bool in_open_orbit(const Point& point, Family family, double tol = kMinorTolerance);

// Size parameter m of a point's space for the given family (for
// ModifiedRect the space is (m-1) x m). Throws IncompatibleGroup when the
// space does not belong to the family.
int size_parameter(Family family, const MatrixSpace& space);

enum class ActionType { Congruence, LeftRight };

ActionType action_type(Family family);

enum class GroupKind { Borel, Unipotent, FirstRowC, BlockD };

std::string_view to_string(GroupKind kind);
bool has_group_shape(GroupKind kind, const CMatrix& matrix, double tol = 1e-12);

// Element of the family's solvable group. For congruence actions only the
// left factor is used; for left-right actions (B, C) acts by B A C^-1.
class GroupElement {
 public:
  static GroupElement make(Family family, int m, CMatrix left, CMatrix right = CMatrix());
  static GroupElement identity(Family family, int m);

  Family family() const noexcept { return family_; }
  int size() const noexcept { return m_; }
  const CMatrix& left() const noexcept { return left_; }
  const CMatrix& right() const noexcept { return right_; }

  GroupKind left_kind() const;
  std::optional<GroupKind> right_kind() const;

  GroupElement operator*(const GroupElement& other) const;

 private:
  GroupElement(Family family, int m, CMatrix left, CMatrix right)
      : family_(family), m_(m), left_(std::move(left)), right_(std::move(right)) {}

  Family family_;
  int m_;
  CMatrix left_;
  CMatrix right_;
};

CMatrix act(const GroupElement& g, const CMatrix& matrix);
Point act(const GroupElement& g, const Point& point);

// Diagonal moduli in [0.5, 1.5] with uniform phase, off-diagonal entries
// complex Gaussian scaled by `spread`.
GroupElement random_group_element(Family family, int m, Rng& rng, double spread = 0.5);

// Complex Gaussian coordinates (open orbit almost surely).
Point random_point(const MatrixSpace& space, Rng& rng);

}  // namespace chol

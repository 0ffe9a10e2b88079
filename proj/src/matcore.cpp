#include "chol/matcore.hpp"

#include <algorithm>
#include <cmath>

namespace chol {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::CholeskySym: return "sym";
    case Family::LU: return "lu";
    case Family::CholeskySkew: return "skew";
    case Family::ModifiedLU: return "mlu";
    case Family::ModifiedRect: return "mrect";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown factorization kind '" + std::string(name) + "' (expected sym|lu|skew|mlu|mrect)");
}

int min_size(Family family) {
  switch (family) {
    case Family::CholeskySym:
    case Family::LU:
    case Family::ModifiedLU: return 1;
    case Family::CholeskySkew:
    case Family::ModifiedRect: return 2;
  }
  return 1;
}

bool is_modified(Family family) {
  return family == Family::ModifiedLU || family == Family::ModifiedRect;
}

// ---------------------------------------------------------------------------
// MatrixSpace

namespace {

std::vector<std::string> chart_names(SpaceKind kind, int rows, int cols,
                                      const std::vector<std::pair<int, int>>& slots) {
  using V = std::vector<std::string>;
  if (kind == SpaceKind::Sym && rows == 2) return V{"x", "y", "z"};
  if (kind == SpaceKind::Sym && rows == 3) return V{"x", "y", "z", "w", "u", "v"};
  if (kind == SpaceKind::Gen && rows == 2 && cols == 2) return V{"x", "y", "z", "w"};
  if (kind == SpaceKind::Gen && rows == 2 && cols == 3) return V{"x", "y", "z", "u", "v", "w"};
  if (kind == SpaceKind::Skew && rows == 4) return V{"x", "y", "z", "u", "v", "w"};
  const bool wide = rows > 9 || cols > 9;
  V names;
  for (auto [i, j] : slots) {
    names.push_back("a" + std::to_string(i + 1) + (wide ? "_" : "") + std::to_string(j + 1));
  }
  return names;
}

}  // namespace

MatrixSpace::MatrixSpace(SpaceKind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorKind::InvalidArgument, "matrix space needs positive size");
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const bool free = kind == SpaceKind::Gen || (kind == SpaceKind::Sym && j >= i) ||
                        (kind == SpaceKind::Skew && j > i);
      if (free) slots_.emplace_back(i, j);
    }
  }
  names_ = chart_names(kind, rows, cols, slots_);
}

MatrixSpace MatrixSpace::sym(int m) { return MatrixSpace(SpaceKind::Sym, m, m); }

MatrixSpace MatrixSpace::gen(int rows, int cols) { return MatrixSpace(SpaceKind::Gen, rows, cols); }

MatrixSpace MatrixSpace::skew(int m) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "Sk_m needs m >= 2");
  return MatrixSpace(SpaceKind::Skew, m, m);
}

MatrixSpace MatrixSpace::for_family(Family family, int m) {
  if (m < min_size(family)) {
    throw Error(ErrorKind::InvalidArgument, "size m = " + std::to_string(m) + " too small for " +
                                                std::string(to_string(family)));
  }
  switch (family) {
    case Family::CholeskySym: return sym(m);
    case Family::LU:
    case Family::ModifiedLU: return gen(m, m);
    case Family::CholeskySkew: return skew(m);
    case Family::ModifiedRect: return gen(m - 1, m);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family");
}

int MatrixSpace::slot_of(int row, int col) const {
  if (kind_ != SpaceKind::Gen && row > col) std::swap(row, col);
  if (kind_ == SpaceKind::Skew && row == col) return -1;
  auto it = std::find(slots_.begin(), slots_.end(), std::pair{row, col});
  return it == slots_.end() ? -1 : static_cast<int>(it - slots_.begin());
}

CMatrix MatrixSpace::materialize(std::span<const cplx> coords) const {
  if (static_cast<int>(coords.size()) != dim()) {
    throw Error(ErrorKind::ShapeMismatch, name() + " expects " + std::to_string(dim()) +
                                              " coordinates, got " + std::to_string(coords.size()));
  }
  CMatrix a = CMatrix::Zero(rows_, cols_);
  for (int s = 0; s < dim(); ++s) {
    auto [i, j] = slots_[s];
    a(i, j) = coords[s];
    if (kind_ == SpaceKind::Sym) a(j, i) = coords[s];
    if (kind_ == SpaceKind::Skew) a(j, i) = -coords[s];
  }
  return a;
}

CMatrix MatrixSpace::materialize(const CVector& coords) const {
  return materialize(std::span<const cplx>(coords.data(), static_cast<std::size_t>(coords.size())));
}

CVector MatrixSpace::encode(const CMatrix& matrix) const {
  if (matrix.rows() != rows_ || matrix.cols() != cols_) {
    throw Error(ErrorKind::ShapeMismatch, "matrix shape does not match " + name());
  }
  CVector coords(dim());
  for (int s = 0; s < dim(); ++s) coords[s] = matrix(slots_[s].first, slots_[s].second);
  return coords;
}

bool MatrixSpace::respects_symmetry(const CMatrix& matrix, double tol) const {
  if (matrix.rows() != rows_ || matrix.cols() != cols_) return false;
  if (kind_ == SpaceKind::Gen) return true;
  const double bound = tol * (1.0 + norm_inf(matrix));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j <= i; ++j) {
      const cplx mirror = kind_ == SpaceKind::Sym ? matrix(j, i) : -matrix(j, i);
      if (std::abs(matrix(i, j) - mirror) > bound) return false;
      if (kind_ == SpaceKind::Skew && i == j && std::abs(matrix(i, i)) > bound) return false;
    }
  }
  return true;
}

std::string MatrixSpace::name() const {
  switch (kind_) {
    case SpaceKind::Sym: return "Sym_" + std::to_string(rows_);
    case SpaceKind::Skew: return "Sk_" + std::to_string(rows_);
    case SpaceKind::Gen: return "M_{" + std::to_string(rows_) + "," + std::to_string(cols_) + "}";
  }
  return "?";
}

PolyGrid MatrixSpace::symbolic_matrix() const {
  const auto n = static_cast<std::size_t>(dim());
  PolyGrid grid(rows_, std::vector<Polynomial>(cols_, Polynomial(n)));
  for (int s = 0; s < dim(); ++s) {
    auto [i, j] = slots_[s];
    grid[i][j] = Polynomial::variable(n, s);
    if (kind_ == SpaceKind::Sym) grid[j][i] = grid[i][j];
    if (kind_ == SpaceKind::Skew) grid[j][i] = -grid[i][j];
  }
  return grid;
}

Point Point::from_matrix(const MatrixSpace& space, const CMatrix& matrix, double tol) {
  if (!space.respects_symmetry(matrix, tol)) {
    throw Error(ErrorKind::InvalidArgument, "matrix does not lie in " + space.name());
  }
  return Point{space, space.encode(matrix)};
}

// ---------------------------------------------------------------------------
// Minors

double norm_inf(const CMatrix& matrix) {
  if (matrix.size() == 0) return 0.0;
  return matrix.cwiseAbs().rowwise().sum().maxCoeff();
}

cplx leading_minor(const CMatrix& matrix, int k) {
  if (k < 1 || k > std::min(matrix.rows(), matrix.cols())) {
    throw Error(ErrorKind::InvalidArgument, "leading minor order " + std::to_string(k) +
                                                " out of range");
  }
  return matrix.topLeftCorner(k, k).partialPivLu().determinant();
}

CMatrix hat(const CMatrix& matrix) {
  if (matrix.cols() < 2) throw Error(ErrorKind::InvalidArgument, "hat needs at least two columns");
  return matrix.rightCols(matrix.cols() - 1);
}

cplx pfaffian(const CMatrix& matrix) {
  const Eigen::Index n = matrix.rows();
  if (matrix.cols() != n || n % 2 != 0) {
    throw Error(ErrorKind::ShapeMismatch, "pfaffian needs an even square matrix");
  }
  CMatrix a = matrix;
  cplx value = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&pivot);
    pivot += k + 1;
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      value = -value;
    }
    if (a(k + 1, k) == cplx(0.0)) return 0.0;
    value *= a(k, k + 1);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      CVector tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      CVector pivot_col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * pivot_col.transpose() - pivot_col * tau.transpose();
    }
  }
  return value;
}

std::vector<MinorSpec> defining_minors(Family family, int m) {
  std::vector<MinorSpec> out;
  switch (family) {
    case Family::CholeskySym:
    case Family::LU:
      for (int k = 1; k <= m; ++k) out.push_back({MinorFamily::Plain, k});
      break;
    case Family::CholeskySkew:
      for (int k = 2; k <= m; k += 2) out.push_back({MinorFamily::Plain, k});
      break;
    case Family::ModifiedLU:
      for (int k = 1; k <= m; ++k) out.push_back({MinorFamily::Plain, k});
      for (int k = 1; k <= m - 1; ++k) out.push_back({MinorFamily::Hat, k});
      break;
    case Family::ModifiedRect:
      for (int k = 1; k <= m - 1; ++k) out.push_back({MinorFamily::Plain, k});
      for (int k = 1; k <= m - 1; ++k) out.push_back({MinorFamily::Hat, k});
      break;
  }
  return out;
}

int size_parameter(Family family, const MatrixSpace& space) {
  const int m = family == Family::ModifiedRect ? space.cols() : space.rows();
  if (m < min_size(family) || !(MatrixSpace::for_family(family, m) == space)) {
    throw Error(ErrorKind::IncompatibleGroup,
                space.name() + " is not the matrix space of " + std::string(to_string(family)));
  }
  return m;
}

std::vector<cplx> minor_profile(const Point& point, Family family) {
  const int m = size_parameter(family, point.space);
  const CMatrix a = point.matrix();
  std::vector<cplx> out;
  for (const auto& spec : defining_minors(family, m)) {
    out.push_back(spec.family == MinorFamily::Plain ? leading_minor(a, spec.k)
                                                    : leading_minor(hat(a), spec.k));
  }
  return out;
}

bool minor_is_nonzero(cplx minor, double scale, int k, double tol) {
  return std::abs(minor) > tol * (1.0 + std::pow(scale, k));
}

void require_open_orbit(const Point& point, Family family, double tol) {
  const int m = size_parameter(family, point.space);
  const double scale = norm_inf(point.matrix());
  const auto specs = defining_minors(family, m);
  const auto values = minor_profile(point, family);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!minor_is_nonzero(values[i], scale, specs[i].k, tol)) {
      throw NotInOpenOrbit(specs[i].family, specs[i].k, std::abs(values[i]));
    }
  }
}

bool in_open_orbit(const Point& point, Family family, double tol) {
  try {
    require_open_orbit(point, family, tol);
    return true;
  } catch (const NotInOpenOrbit&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Groups

ActionType action_type(Family family) {
  return family == Family::CholeskySym || family == Family::CholeskySkew ? ActionType::Congruence
                                                                         : ActionType::LeftRight;
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Borel: return "B";
    case GroupKind::Unipotent: return "N";
    case GroupKind::FirstRowC: return "C";
    case GroupKind::BlockD: return "D";
  }
  return "?";
}

namespace {

// Block index for D_m: pairs (0,1), (2,3), ...; a trailing odd index is its
// own block.
int d_block(Eigen::Index i) { return static_cast<int>(i / 2); }

GroupKind left_group(Family family) {
  return family == Family::CholeskySkew ? GroupKind::BlockD : GroupKind::Borel;
}

std::optional<GroupKind> right_group(Family family) {
  switch (family) {
    case Family::LU: return GroupKind::Unipotent;
    case Family::ModifiedLU:
    case Family::ModifiedRect: return GroupKind::FirstRowC;
    default: return std::nullopt;
  }
}

int left_dim(Family family, int m) { return family == Family::ModifiedRect ? m - 1 : m; }

}  // namespace

bool has_group_shape(GroupKind kind, const CMatrix& a, double tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) return false;
  const double eps = tol * (1.0 + norm_inf(a));
  auto zero = [&](cplx v) { return std::abs(v) <= eps; };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx v = a(i, j);
      switch (kind) {
        case GroupKind::Borel:
          if (j > i && !zero(v)) return false;
          if (i == j && zero(v)) return false;
          break;
        case GroupKind::Unipotent:
          if (j < i && !zero(v)) return false;
          if (i == j && !zero(v - 1.0)) return false;
          break;
        case GroupKind::FirstRowC:
          if (j < i && !zero(v)) return false;
          if (i == 0 && j == 0 && !zero(v - 1.0)) return false;
          if (i == 0 && j > 0 && !zero(v)) return false;
          if (i == j && i > 0 && zero(v)) return false;
          break;
        case GroupKind::BlockD: {
          const bool odd_tail = n % 2 == 1 && i == n - 1;
          if (d_block(j) > d_block(i) && !zero(v)) return false;
          if (i == j) {
            if (odd_tail ? !zero(v - 1.0) : zero(v)) return false;
            if (!odd_tail && i % 2 == 1 && !zero(v - a(i - 1, i - 1))) return false;
          } else if (d_block(i) == d_block(j) && !zero(v)) {
            return false;
          }
          break;
        }
      }
    }
  }
  return true;
}

GroupElement GroupElement::make(Family family, int m, CMatrix left, CMatrix right) {
  if (m < min_size(family)) throw Error(ErrorKind::InvalidArgument, "group size too small");
  const int ln = left_dim(family, m);
  if (left.rows() != ln || left.cols() != ln || !has_group_shape(left_group(family), left)) {
    throw Error(ErrorKind::IncompatibleGroup, "left factor is not in " +
                                                  std::string(to_string(left_group(family))) +
                                                  "_" + std::to_string(ln));
  }
  const auto rg = right_group(family);
  if (rg) {
    if (right.rows() != m || right.cols() != m || !has_group_shape(*rg, right)) {
      throw Error(ErrorKind::IncompatibleGroup, "right factor is not in " +
                                                    std::string(to_string(*rg)) + "_" +
                                                    std::to_string(m));
    }
  } else if (right.size() != 0) {
    throw Error(ErrorKind::IncompatibleGroup, "congruence action takes a single factor");
  }
  return GroupElement(family, m, std::move(left), std::move(right));
}

GroupElement GroupElement::identity(Family family, int m) {
  const int ln = left_dim(family, m);
  CMatrix right = right_group(family) ? CMatrix(CMatrix::Identity(m, m)) : CMatrix();
  return make(family, m, CMatrix::Identity(ln, ln), right);
}

GroupKind GroupElement::left_kind() const { return left_group(family_); }

std::optional<GroupKind> GroupElement::right_kind() const { return right_group(family_); }

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (family_ != other.family_ || m_ != other.m_) {
    throw Error(ErrorKind::IncompatibleGroup, "product of elements from different groups");
  }
  CMatrix right = right_.size() == 0 ? CMatrix() : CMatrix(right_ * other.right_);
  return GroupElement(family_, m_, left_ * other.left_, std::move(right));
}

CMatrix act(const GroupElement& g, const CMatrix& a) {
  if (action_type(g.family()) == ActionType::Congruence) {
    return g.left() * a * g.left().transpose();
  }
  // B A C^-1 with C upper triangular: solve X C = B A.
  const CMatrix ba = g.left() * a;
  return g.right().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(ba);
}

Point act(const GroupElement& g, const Point& point) {
  const MatrixSpace expected = MatrixSpace::for_family(g.family(), g.size());
  if (!(expected == point.space)) {
    throw Error(ErrorKind::IncompatibleGroup, std::string(to_string(g.family())) +
                                                  " group does not act on " + point.space.name());
  }
  return Point{point.space, point.space.encode(act(g, point.matrix()))};
}

GroupElement random_group_element(Family family, int m, Rng& rng, double spread) {
  auto fill = [&](GroupKind kind, int n) {
    CMatrix g = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        switch (kind) {
          case GroupKind::Borel:
            if (i == j) g(i, j) = rng.complex_annulus(0.5, 1.5);
            if (i > j) g(i, j) = spread * rng.complex_normal();
            break;
          case GroupKind::Unipotent:
            if (i == j) g(i, j) = 1.0;
            if (i < j) g(i, j) = spread * rng.complex_normal();
            break;
          case GroupKind::FirstRowC:
            if (i == 0) {
              g(i, j) = j == 0 ? 1.0 : 0.0;
            } else if (i == j) {
              g(i, j) = rng.complex_annulus(0.5, 1.5);
            } else if (i < j) {
              g(i, j) = spread * rng.complex_normal();
            }
            break;
          case GroupKind::BlockD:
            if (d_block(j) < d_block(i)) g(i, j) = spread * rng.complex_normal();
            break;
        }
      }
    }
    if (kind == GroupKind::BlockD) {
      for (int b = 0; 2 * b + 1 < n; ++b) {
        const cplx r = rng.complex_annulus(0.5, 1.5);
        g(2 * b, 2 * b) = r;
        g(2 * b + 1, 2 * b + 1) = r;
      }
      if (n % 2 == 1) g(n - 1, n - 1) = 1.0;
    }
    return g;
  };
  CMatrix left = fill(left_group(family), left_dim(family, m));
  const auto rg = right_group(family);
  CMatrix right = rg ? fill(*rg, m) : CMatrix();
  return GroupElement::make(family, m, std::move(left), std::move(right));
}

Point random_point(const MatrixSpace& space, Rng& rng) {
  CVector coords(space.dim());
  for (int s = 0; s < space.dim(); ++s) coords[s] = rng.complex_normal();
  return Point{space, coords};
}

}  // namespace chol

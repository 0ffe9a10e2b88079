#include "chol/factor.hpp"

#include <cmath>
#include <limits>

namespace chol {

cplx principal_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  // std::sqrt honours the sign of a zero imaginary part; fold (-pi/2) onto
  // the closed end of the half-open range.
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  return r;
}

CMatrix Factorization::reconstruct() const {
  if (C) return B * K * *C;
  return B * K * B.transpose();
}

CMatrix structure_matrix(Family kind, int m) {
  if (m < min_size(kind)) {
    throw Error(ErrorKind::InvalidArgument,
                "structure matrix size " + std::to_string(m) + " too small for " +
                    std::string(to_string(kind)));
  }
  switch (kind) {
    case Family::CholeskySym:
    case Family::LU: return CMatrix::Identity(m, m);
    case Family::CholeskySkew: {
      CMatrix j = CMatrix::Zero(m, m);
      for (int b = 0; 2 * b + 1 < m; ++b) {
        j(2 * b, 2 * b + 1) = -1.0;
        j(2 * b + 1, 2 * b) = 1.0;
      }
      return j;
    }
    case Family::ModifiedLU:
    case Family::ModifiedRect: {
      const int rows = kind == Family::ModifiedLU ? m : m - 1;
      CMatrix k = CMatrix::Zero(rows, m);
      for (int i = 0; i < rows; ++i) {
        k(i, i) = 1.0;
        if (i + 1 < m) k(i, i + 1) = 1.0;
      }
      return k;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown factorization kind");
}

namespace {

struct Prepared {
  CMatrix a;
  int m;
  double scale;
};

Prepared prepare(const Point& point, Family kind, const FactorOptions& opts) {
  const int m = size_parameter(kind, point.space);
  require_open_orbit(point, kind, opts.minor_tol);
  CMatrix a = point.matrix();
  const double scale = norm_inf(a);
  return {std::move(a), m, scale};
}

Factorization finish(Family kind, const Point& point, const Prepared& prep, CMatrix b,
                     std::optional<CMatrix> c, const FactorOptions& opts) {
  Factorization f;
  f.kind = kind;
  f.B = std::move(b);
  f.C = std::move(c);
  f.K = structure_matrix(kind, prep.m);
  f.residual = norm_inf(prep.a - f.reconstruct());
  f.minors = minor_profile(point, kind);
  const auto specs = defining_minors(kind, prep.m);
  f.conditioning = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    f.conditioning = std::min(f.conditioning,
                              std::abs(f.minors[i]) / (1.0 + std::pow(prep.scale, specs[i].k)));
  }
  if (f.residual > opts.residual_tol * (1.0 + prep.scale)) {
    throw Error(ErrorKind::ResidualTooLarge,
                "factorization residual " + std::to_string(f.residual) + " exceeds tolerance");
  }
  return f;
}

// Doolittle elimination without pivoting: a = lower * upper with lower unit
// lower-triangular (rows x rows) and upper upper-trapezoidal (rows x cols).
void doolittle(const CMatrix& a, CMatrix& lower, CMatrix& upper) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  lower = CMatrix::Identity(rows, rows);
  upper = CMatrix::Zero(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k) {
    for (Eigen::Index j = k; j < cols; ++j) {
      cplx s = a(k, j);
      for (Eigen::Index p = 0; p < k; ++p) s -= lower(k, p) * upper(p, j);
      upper(k, j) = s;
    }
    for (Eigen::Index i = k + 1; i < rows; ++i) {
      cplx s = a(i, k);
      for (Eigen::Index p = 0; p < k; ++p) s -= lower(i, p) * upper(p, k);
      lower(i, k) = s / upper(k, k);
    }
  }
}

// Shared core of both modified factorizations. With a = L U0 and a
// diagonal rescaling U = diag(e) U0, the requirement that K C = U (resp.
// K' C = U) has C in C_m reduces to
//   sum_{j <= k} (-1)^j U(j, k) = 0   for every column k >= 1 reachable,
// a triangular recurrence for e once e_0 = 1 / U0(0, 0) fixes U(0, 0) = 1.
void modified_core(const CMatrix& a, int m, CMatrix& b, CMatrix& c) {
  CMatrix lower;
  CMatrix u0;
  doolittle(a, lower, u0);
  const Eigen::Index rows = a.rows();
  CVector e(rows);
  e[0] = 1.0 / u0(0, 0);
  for (Eigen::Index k = 1; k < rows; ++k) {
    cplx s = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) s += (j % 2 == 0 ? 1.0 : -1.0) * u0(j, k) * e[j];
    const double sign_k = k % 2 == 0 ? 1.0 : -1.0;
    e[k] = -s / (sign_k * u0(k, k));
  }
  b = lower * e.cwiseInverse().asDiagonal();
  const CMatrix u = e.asDiagonal() * u0;

  // Rows of C from K C = U: C_0 = e_0^T, C_{j+1} = U_j - C_j.
  c = CMatrix::Zero(m, m);
  c(0, 0) = 1.0;
  if (rows == m) {
    // Square K: back-substitute from the last row, C = K^-1 U.
    c.row(m - 1) = u.row(m - 1);
    for (int j = m - 2; j >= 1; --j) c.row(j) = u.row(j) - c.row(j + 1);
  } else {
    for (int j = 0; j + 1 < m; ++j) c.row(j + 1) = u.row(j) - c.row(j);
  }
  // Structural zeros: first row beyond (0,0) and the strict lower triangle.
  c.row(0).setZero();
  c(0, 0) = 1.0;
  for (int i = 1; i < m; ++i) {
    for (int j = 0; j < i; ++j) c(i, j) = 0.0;
  }
}

}  // namespace

Factorization cholesky_sym(const Point& point, const FactorOptions& opts) {
  const Family kind = Family::CholeskySym;
  const Prepared prep = prepare(point, kind, opts);
  const CMatrix& a = prep.a;
  const int m = prep.m;
  CMatrix b = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    cplx d = a(j, j);
    for (int k = 0; k < j; ++k) d -= b(j, k) * b(j, k);
    b(j, j) = principal_sqrt(d);
    for (int i = j + 1; i < m; ++i) {
      cplx s = a(i, j);
      for (int k = 0; k < j; ++k) s -= b(i, k) * b(j, k);
      b(i, j) = s / b(j, j);
    }
  }
  return finish(kind, point, prep, std::move(b), std::nullopt, opts);
}

Factorization lu(const Point& point, const FactorOptions& opts) {
  const Family kind = Family::LU;
  const Prepared prep = prepare(point, kind, opts);
  const CMatrix& a = prep.a;
  const int m = prep.m;
  CMatrix b = CMatrix::Zero(m, m);
  CMatrix c = CMatrix::Identity(m, m);
  for (int k = 0; k < m; ++k) {
    for (int i = k; i < m; ++i) {
      cplx s = a(i, k);
      for (int p = 0; p < k; ++p) s -= b(i, p) * c(p, k);
      b(i, k) = s;
    }
    for (int j = k + 1; j < m; ++j) {
      cplx s = a(k, j);
      for (int p = 0; p < k; ++p) s -= b(k, p) * c(p, j);
      c(k, j) = s / b(k, k);
    }
  }
  return finish(kind, point, prep, std::move(b), std::move(c), opts);
}

Factorization cholesky_skew(const Point& point, const FactorOptions& opts) {
  const Family kind = Family::CholeskySkew;
  const Prepared prep = prepare(point, kind, opts);
  const CMatrix& a = prep.a;
  const int m = prep.m;
  const int blocks = m / 2;
  Eigen::Matrix2cd j2;
  j2 << 0.0, -1.0, 1.0, 0.0;
  const Eigen::Matrix2cd j2_inv = -j2;

  CMatrix b = CMatrix::Zero(m, m);
  // Rows of block I: [2I, 2I + 2) for I < blocks; the odd tail row 2*blocks
  // forms a one-row block.
  auto rows_of = [&](int block) { return block < blocks ? 2 : 1; };
  for (int jb = 0; jb < blocks; ++jb) {
    const int c0 = 2 * jb;
    Eigen::Matrix2cd s = a.block<2, 2>(c0, c0);
    for (int kb = 0; kb < jb; ++kb) {
      const Eigen::Matrix2cd bjk = b.block<2, 2>(c0, 2 * kb);
      s -= bjk * j2 * bjk.transpose();
    }
    // s = r^2 J2 on the open orbit.
    const cplx r = principal_sqrt(s(1, 0));
    b(c0, c0) = r;
    b(c0 + 1, c0 + 1) = r;
    const int total_blocks = blocks + (m % 2);
    for (int ib = jb + 1; ib < total_blocks; ++ib) {
      const int r0 = 2 * ib;
      const int nr = rows_of(ib);
      CMatrix rhs = a.block(r0, c0, nr, 2);
      for (int kb = 0; kb < jb; ++kb) {
        rhs -= b.block(r0, 2 * kb, nr, 2) * j2 * b.block<2, 2>(c0, 2 * kb).transpose();
      }
      b.block(r0, c0, nr, 2) = rhs * j2_inv / r;
    }
  }
  if (m % 2 == 1) b(m - 1, m - 1) = 1.0;
  return finish(kind, point, prep, std::move(b), std::nullopt, opts);
}

Factorization modified_lu(const Point& point, const FactorOptions& opts) {
  const Family kind = Family::ModifiedLU;
  const Prepared prep = prepare(point, kind, opts);
  CMatrix b;
  CMatrix c;
  modified_core(prep.a, prep.m, b, c);
  return finish(kind, point, prep, std::move(b), std::move(c), opts);
}

Factorization modified_rect(const Point& point, const FactorOptions& opts) {
  const Family kind = Family::ModifiedRect;
  const Prepared prep = prepare(point, kind, opts);
  CMatrix b;
  CMatrix c;
  modified_core(prep.a, prep.m, b, c);
  return finish(kind, point, prep, std::move(b), std::move(c), opts);
}

Factorization factor(const Point& a, Family kind, const FactorOptions& opts) {
  switch (kind) {
    case Family::CholeskySym: return cholesky_sym(a, opts);
    case Family::LU: return lu(a, opts);
    case Family::CholeskySkew: return cholesky_skew(a, opts);
    case Family::ModifiedLU: return modified_lu(a, opts);
    case Family::ModifiedRect: return modified_rect(a, opts);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown factorization kind");
}

}  // namespace chol

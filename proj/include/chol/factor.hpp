#pragma once

#include <optional>
#include <vector>

#include "chol/matcore.hpp"

namespace chol {

struct FactorOptions {
  double minor_tol = kMinorTolerance;
  // Accepted outputs satisfy residual <= residual_tol * (1 + |A|_inf).
  double residual_tol = 1e-10;
};

// A = B * K * C. For the congruence kinds C is absent and stands for B^T.
struct Factorization {
  Family kind;
  CMatrix B;
  std::optional<CMatrix> C;
  CMatrix K;
  double residual = 0.0;
  // min_k |minor_k| / (1 + |A|_inf^k) over the defining minors.
  double conditioning = 0.0;
  std::vector<cplx> minors;

  CMatrix reconstruct() const;
};

// identity (sym, lu), J or J' (skew), bidiagonal K (mlu, m x m) or K'
// (mrect, (m-1) x m).
CMatrix structure_matrix(Family kind, int m);

Factorization cholesky_sym(const Point& a, const FactorOptions& opts = {});
Factorization lu(const Point& a, const FactorOptions& opts = {});
Factorization cholesky_skew(const Point& a, const FactorOptions& opts = {});
Factorization modified_lu(const Point& a, const FactorOptions& opts = {});
Factorization modified_rect(const Point& a, const FactorOptions& opts = {});

// Dispatches on the kind.
Factorization factor(const Point& a, Family kind, const FactorOptions& opts = {});

// Principal square root with argument in (-pi/2, pi/2].
cplx principal_sqrt(cplx z);

}  // namespace chol

#pragma once

// Helpers shared by the unit suites. Everything here is independent of the
// library code paths it is used to check.

#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

#include "chol/matcore.hpp"
#include "chol/poly.hpp"

namespace chol::testing {

inline Polynomial P(std::string_view text, const std::vector<std::string>& names) {
  return parse_polynomial(text, names);
}

// Leibniz expansion over all permutations.
inline Polynomial leibniz_det(const PolyGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t nvars = grid[0][0].nvars();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial sum(nvars);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    Polynomial term = Polynomial::constant(nvars, inversions % 2 == 0 ? 1 : -1);
    for (std::size_t i = 0; i < n && !term.is_zero(); ++i) term = term * grid[i][perm[i]];
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

inline CMatrix numeric_grid(const PolyGrid& grid, std::span<const cplx> point) {
  CMatrix out(grid.size(), grid.empty() ? 0 : grid[0].size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid[i].size(); ++j) out(i, j) = eval(grid[i][j], point);
  }
  return out;
}

inline std::vector<cplx> to_vector(const CVector& v) { return {v.data(), v.data() + v.size()}; }

inline CMatrix cm(std::initializer_list<std::initializer_list<cplx>> rows) {
  CMatrix out(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto& v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace chol::testing

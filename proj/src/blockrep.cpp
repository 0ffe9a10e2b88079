#include "chol/blockrep.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <numeric>

namespace chol {

namespace {

Eigen::MatrixXi unit(int n, int i, int j) {
  Eigen::MatrixXi e = Eigen::MatrixXi::Zero(n, n);
  e(i, j) = 1;
  return e;
}

std::string elementary_label(int i, int j) {
  const bool wide = i >= 9 || j >= 9;
  return "E" + std::to_string(i + 1) + (wide ? "_" : "") + std::to_string(j + 1);
}

// (X A) for an integer X and a symbolic A.
PolyGrid int_times(const Eigen::MatrixXi& x, const PolyGrid& a, std::size_t nvars) {
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  PolyGrid out(x.rows(), std::vector<Polynomial>(cols, Polynomial(nvars)));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[k][j].scaled(x(i, k));
    }
  }
  return out;
}

// (A Y) for a symbolic A and an integer Y.
PolyGrid times_int(const PolyGrid& a, const Eigen::MatrixXi& y, std::size_t nvars) {
  PolyGrid out(a.size(), std::vector<Polynomial>(y.cols(), Polynomial(nvars)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (Eigen::Index k = 0; k < y.rows(); ++k) {
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        if (y(k, j) != 0) out[i][j] += a[i][k].scaled(y(k, j));
      }
    }
  }
  return out;
}

PolyGrid symbolic_field(const Representation& rep, const Generator& g, const PolyGrid& a) {
  const auto n = static_cast<std::size_t>(rep.space.dim());
  PolyGrid out = int_times(g.left, a, n);
  const PolyGrid second = rep.action == ActionType::Congruence
                              ? times_int(a, g.left.transpose(), n)
                              : times_int(a, g.right, n);
  const bool subtract = rep.action == ActionType::LeftRight;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < out[i].size(); ++j) {
      if (subtract) {
        out[i][j] -= second[i][j];
      } else {
        out[i][j] += second[i][j];
      }
    }
  }
  return out;
}

PolyGrid upper_left(const PolyGrid& a, int rows, int cols, int col_offset = 0) {
  PolyGrid out(rows);
  for (int i = 0; i < rows; ++i) {
    out[i].assign(a[i].begin() + col_offset, a[i].begin() + col_offset + cols);
  }
  return out;
}

}  // namespace

Representation build_representation(Family family, int m) {
  if (m < min_size(family)) {
    throw Error(ErrorKind::InvalidArgument, "size " + std::to_string(m) + " too small for " +
                                                std::string(to_string(family)));
  }
  Representation rep{family, m, MatrixSpace::for_family(family, m), action_type(family), {}, {}};
  const int ln = family == Family::ModifiedRect ? m - 1 : m;
  const bool left_right = rep.action == ActionType::LeftRight;
  const Eigen::MatrixXi no_right = left_right ? Eigen::MatrixXi::Zero(m, m) : Eigen::MatrixXi();

  if (family == Family::CholeskySkew) {
    for (int j = 0; j < m; ++j) {
      const int bj = j / 2;
      if (j % 2 == 0 && j + 1 < m) {
        Eigen::MatrixXi x = unit(m, j, j) + unit(m, j + 1, j + 1);
        rep.torus.push_back(static_cast<int>(rep.generators.size()));
        rep.generators.push_back({x, no_right, elementary_label(j, j) + "+" +
                                                   elementary_label(j + 1, j + 1)});
      }
      for (int i = 0; i < m; ++i) {
        if (i / 2 > bj) rep.generators.push_back({unit(m, i, j), no_right, elementary_label(i, j)});
      }
    }
  } else {
    for (int j = 0; j < ln; ++j) {
      for (int i = j; i < ln; ++i) {
        if (i == j) rep.torus.push_back(static_cast<int>(rep.generators.size()));
        rep.generators.push_back({unit(ln, i, j), no_right, elementary_label(i, j)});
      }
    }
  }

  if (left_right) {
    const Eigen::MatrixXi no_left = Eigen::MatrixXi::Zero(ln, ln);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i <= j; ++i) {
        const bool in_n = family == Family::LU && i < j;
        const bool in_c = is_modified(family) && i >= 1;
        if (!in_n && !in_c) continue;
        if (i == j) rep.torus.push_back(static_cast<int>(rep.generators.size()));
        rep.generators.push_back({no_left, unit(m, i, j), "right " + elementary_label(i, j)});
      }
    }
  }

  if (static_cast<int>(rep.generators.size()) != rep.space.dim()) {
    throw Error(ErrorKind::ShapeMismatch,
                "group dimension " + std::to_string(rep.generators.size()) +
                    " differs from dim " + rep.space.name() + " = " +
                    std::to_string(rep.space.dim()));
  }
  return rep;
}

CMatrix vector_field(const Representation& rep, int index, const CMatrix& a) {
  const Generator& g = rep.generators.at(index);
  const CMatrix x = g.left.cast<cplx>();
  if (rep.action == ActionType::Congruence) return x * a + a * x.transpose();
  return x * a - a * g.right.cast<cplx>();
}

GroupElement exp_generator(const Representation& rep, int index, cplx t) {
  const Generator& g = rep.generators.at(index);
  const CMatrix left = (t * g.left.cast<cplx>()).exp();
  if (rep.action == ActionType::Congruence) return GroupElement::make(rep.family, rep.m, left);
  const CMatrix right = (t * g.right.cast<cplx>()).exp();
  return GroupElement::make(rep.family, rep.m, left, right);
}

CoefficientMatrix coefficient_matrix(const Representation& rep) {
  const int n = rep.space.dim();
  const PolyGrid a = rep.space.symbolic_matrix();
  CoefficientMatrix out;
  out.entries.assign(n, std::vector<Polynomial>(n, Polynomial(n)));
  out.row_names = rep.space.variable_names();
  for (int c = 0; c < n; ++c) {
    const PolyGrid field = symbolic_field(rep, rep.generators[c], a);
    for (int s = 0; s < n; ++s) {
      auto [i, j] = rep.space.slot_position(s);
      out.entries[s][c] = field[i][j];
    }
    out.column_labels.push_back(rep.generators[c].label);
  }
  return out;
}

std::vector<NamedPolynomial> defining_polynomials(Family family, int m) {
  const MatrixSpace space = MatrixSpace::for_family(family, m);
  const PolyGrid a = space.symbolic_matrix();
  std::vector<NamedPolynomial> out;
  for (const MinorSpec& spec : defining_minors(family, m)) {
    const std::string k = std::to_string(spec.k);
    if (family == Family::CholeskySkew) {
      out.push_back({"Pf A^(" + k + ")", pfaffian_poly(upper_left(a, spec.k, spec.k))});
    } else if (spec.family == MinorFamily::Plain) {
      out.push_back({"det A^(" + k + ")", det_poly(upper_left(a, spec.k, spec.k))});
    } else {
      out.push_back({"det hat(A)^(" + k + ")", det_poly(upper_left(a, spec.k, spec.k, 1))});
    }
  }
  return out;
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::Free ? "Free" : "FreeStar";
}

Polynomial ExceptionalFactored::reduced() const {
  Polynomial out = Polynomial::constant(determinant.nvars(), 1);
  for (const PolyFactor& f : factors) {
    if (f.multiplicity > 0) out = out * f.poly;
  }
  return out;
}

ExceptionalFactored exceptional_equation(const Representation& rep) {
  ExceptionalFactored out;
  out.determinant = det_poly(coefficient_matrix(rep).entries);
  if (out.determinant.is_zero()) {
    throw Error(ErrorKind::ResidualNotConstant, "coefficient determinant vanishes identically");
  }
  Polynomial rest = out.determinant;
  bool all_simple = true;
  for (NamedPolynomial& named : defining_polynomials(rep.family, rep.m)) {
    int e = 0;
    while (!rest.is_constant()) {
      auto q = try_divide(rest, named.poly);
      if (!q) break;
      rest = std::move(*q);
      ++e;
    }
    all_simple = all_simple && e == 1;
    out.factors.push_back({std::move(named.poly), e});
    out.labels.push_back(std::move(named.label));
  }
  if (!rest.is_constant()) {
    throw Error(ErrorKind::ResidualNotConstant,
                "quotient " + rest.to_string(rep.space.variable_names()) +
                    " is not a constant");
  }
  out.constant = rest.constant_term();
  out.verdict = all_simple ? Verdict::Free : Verdict::FreeStar;
  return out;
}

Filtration shipped_filtration(const Representation& rep) {
  const int m = rep.m;
  std::vector<std::pair<int, int>> regions;
  switch (rep.family) {
    case Family::CholeskySym:
    case Family::LU:
      for (int k = 1; k <= m; ++k) regions.emplace_back(k, k);
      break;
    case Family::CholeskySkew:
      for (int k = 2; k <= m; k += 2) regions.emplace_back(k, k);
      if (m % 2 == 1) regions.emplace_back(m, m);
      break;
    case Family::ModifiedLU:
    case Family::ModifiedRect: {
      const int rows = rep.family == Family::ModifiedLU ? m : m - 1;
      for (int k = 1; k <= rows; ++k) {
        regions.emplace_back(k, k);
        if (k < m) regions.emplace_back(k, k + 1);
      }
      break;
    }
  }
  const int n = static_cast<int>(regions.size());
  Filtration out;
  for (int j = 1; j <= n; ++j) {
    std::vector<int> w;
    for (int s = 0; s < rep.space.dim(); ++s) {
      if (j == n) {
        w.push_back(s);
        continue;
      }
      auto [r, c] = regions[n - j - 1];
      auto [i, k] = rep.space.slot_position(s);
      if (!(i < r && k < c)) w.push_back(s);
    }
    out.push_back(std::move(w));
  }
  return out;
}

BlockReport verify_block_structure(const Representation& rep, const Filtration& filtration,
                                   Rng& rng) {
  const int dim = rep.space.dim();
  const int n = static_cast<int>(filtration.size());
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty filtration");

  std::vector<int> level(dim, 0);
  for (int j = 0; j < n; ++j) {
    const auto& w = filtration[j];
    if (!std::is_sorted(w.begin(), w.end()) ||
        std::adjacent_find(w.begin(), w.end()) != w.end() ||
        (!w.empty() && (w.front() < 0 || w.back() >= dim))) {
      throw Error(ErrorKind::InvalidArgument,
                  "filtration step " + std::to_string(j + 1) + " is not a set of coordinates");
    }
    if (j > 0 && !(filtration[j - 1].size() < w.size() &&
                   std::includes(w.begin(), w.end(), filtration[j - 1].begin(),
                                 filtration[j - 1].end()))) {
      throw Error(ErrorKind::InvalidArgument, "filtration is not strictly increasing at step " +
                                                  std::to_string(j + 1));
    }
    for (int s : w) {
      if (level[s] == 0) level[s] = j + 1;
    }
  }
  if (static_cast<int>(filtration.back().size()) != dim) {
    throw Error(ErrorKind::InvalidArgument, "last filtration step must be the whole space");
  }

  // (a) invariance, checked on random group elements.
  Rng inv_rng = rng.split("invariance");
  for (int j = 0; j + 1 < n; ++j) {
    for (int trial = 0; trial < 4; ++trial) {
      CVector v = CVector::Zero(dim);
      for (int s : filtration[j]) v[s] = inv_rng.complex_normal();
      const GroupElement g = random_group_element(rep.family, rep.m, inv_rng);
      const CVector moved = rep.space.encode(act(g, rep.space.materialize(v)));
      const double scale = 1e-10 * (1.0 + moved.cwiseAbs().maxCoeff());
      for (int s = 0; s < dim; ++s) {
        if (level[s] > j + 1 && std::abs(moved[s]) > scale) {
          throw Error(ErrorKind::NotInvariant,
                      "step " + std::to_string(j + 1) + " is not preserved by the group",
                      {j + 1});
        }
      }
    }
  }

  // (b) block lower triangular form, top level first.
  const CoefficientMatrix coef = coefficient_matrix(rep);
  BlockReport report;
  report.generator_levels.assign(dim, 1);
  for (int c = 0; c < dim; ++c) {
    for (int s = 0; s < dim; ++s) {
      if (!coef.entries[s][c].is_zero()) {
        report.generator_levels[c] = std::max(report.generator_levels[c], level[s]);
      }
    }
  }
  auto by_level_desc = [](const std::vector<int>& lv) {
    std::vector<int> order(lv.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lv[a] > lv[b]; });
    return order;
  };
  const std::vector<int> rows = by_level_desc(level);
  const std::vector<int> cols = by_level_desc(report.generator_levels);

  std::vector<int> block_of(dim);
  std::vector<int> starts;
  for (int j = n; j >= 1; --j) {
    starts.push_back(static_cast<int>(std::count_if(level.begin(), level.end(),
                                                    [&](int l) { return l > j; })));
    report.block_sizes.push_back(
        static_cast<int>(std::count(level.begin(), level.end(), j)));
  }
  for (int b = 0; b < n; ++b) {
    for (int p = starts[b]; p < starts[b] + report.block_sizes[b]; ++p) block_of[p] = b;
  }
  for (int pr = 0; pr < dim; ++pr) {
    for (int pc = 0; pc < dim; ++pc) {
      if (block_of[pr] < block_of[pc] && !coef.entries[rows[pr]][cols[pc]].is_zero()) {
        // Report the first offending block in row-major block order.
        int bi = block_of[pr];
        int bj = block_of[pc];
        for (int qr = 0; qr < dim; ++qr) {
          for (int qc = 0; qc < dim; ++qc) {
            const int a = block_of[qr];
            const int b = block_of[qc];
            if (a < b && !coef.entries[rows[qr]][cols[qc]].is_zero() &&
                std::pair(a, b) < std::pair(bi, bj)) {
              bi = a;
              bj = b;
            }
          }
        }
        throw Error(ErrorKind::NotBlockTriangular,
                    "block (" + std::to_string(bi + 1) + ", " + std::to_string(bj + 1) +
                        ") above the diagonal is nonzero",
                    {bi + 1, bj + 1});
      }
    }
  }

  // (c) diagonal block determinants.
  for (int b = 0; b < n; ++b) {
    const int size = report.block_sizes[b];
    PolyGrid block(size, std::vector<Polynomial>(size, Polynomial(dim)));
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        block[r][c] = coef.entries[rows[starts[b] + r]][cols[starts[b] + c]];
      }
    }
    report.p.push_back(det_poly(block));
  }
  return report;
}

}  // namespace chol

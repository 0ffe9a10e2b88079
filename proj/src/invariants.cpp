#include "chol/invariants.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "chol/factor.hpp"

namespace chol {

namespace {

constexpr int kCharacterPoints = 20;
constexpr double kConstancyTol = 1e-8;

std::vector<cplx> coords_of(const CVector& v) { return {v.data(), v.data() + v.size()}; }

// d log f along xi at the matrix a.
cplx log_derivative(const Representation& rep, const CompiledPolynomial& f, int generator,
                    const CMatrix& a, std::vector<cplx>& grad) {
  const auto coords = coords_of(rep.space.encode(a));
  const cplx value = f.value_and_gradient(coords, grad);
  const CVector xi = rep.space.encode(vector_field(rep, generator, a));
  cplx d = 0.0;
  for (int s = 0; s < xi.size(); ++s) d += grad[s] * xi[s];
  return d / value;
}

}  // namespace

CVector infinitesimal_character(const Representation& rep, const Polynomial& f, Rng& rng) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero polynomial");
  const CompiledPolynomial compiled(f);
  std::vector<cplx> grad(rep.space.dim());
  const int k = rep.rank();
  CVector lambda(k);
  std::vector<CMatrix> points;
  for (int p = 0; p < kCharacterPoints; ++p) points.push_back(random_point(rep.space, rng).matrix());
  for (int j = 0; j < k; ++j) {
    for (int p = 0; p < kCharacterPoints; ++p) {
      const cplx value = log_derivative(rep, compiled, rep.torus[j], points[p], grad);
      if (p == 0) {
        lambda[j] = value;
      } else if (std::abs(value - lambda[j]) > kConstancyTol * (1.0 + std::abs(lambda[j]))) {
        throw Error(ErrorKind::NotConstant,
                    "infinitesimal character along torus direction " + std::to_string(j + 1) +
                        " varies between sample points",
                    {j + 1});
      }
    }
  }
  return lambda;
}

std::vector<RelativeInvariant> basic_invariants(const Representation& rep, Rng& rng) {
  std::vector<RelativeInvariant> out;
  for (NamedPolynomial& named : defining_polynomials(rep.family, rep.m)) {
    Rng sub = rng.split(named.label);
    CVector lambda = infinitesimal_character(rep, named.poly, sub);
    out.push_back({std::move(named.label), std::move(named.poly), std::move(lambda)});
  }
  return out;
}

InvarianceReport verify_relative_invariance(const Representation& rep, const Polynomial& f,
                                            int trials, Rng& rng) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero polynomial");
  const CompiledPolynomial compiled(f);
  InvarianceReport report;
  for (int t = 0; t < trials; ++t) {
    const GroupElement g = random_group_element(rep.family, rep.m, rng);
    cplx first = 0.0;
    for (int p = 0; p < kCharacterPoints; ++p) {
      const CMatrix v = random_point(rep.space, rng).matrix();
      const cplx ratio = compiled(coords_of(rep.space.encode(act(g, v)))) /
                         compiled(coords_of(rep.space.encode(v)));
      if (p == 0) {
        first = ratio;
      } else if (std::abs(ratio - first) > kConstancyTol * (1.0 + std::abs(first))) {
        throw Error(ErrorKind::InvarianceViolated,
                    "f(g v) / f(v) depends on v for sampled group element " +
                        std::to_string(t + 1),
                    {t + 1, p + 1});
      }
    }
    report.ratios.push_back(first);
  }
  return report;
}

LambdaMatrix lambda_matrix(const Representation& rep, Rng& rng) {
  const auto invariants = basic_invariants(rep, rng);
  const int rows = static_cast<int>(invariants.size());
  const int k = rep.rank();
  if (rows != k) {
    throw Error(ErrorKind::SingularLambda, std::to_string(rows) + " invariants against torus rank " +
                                               std::to_string(k));
  }
  LambdaMatrix out;
  out.raw.resize(k, k);
  out.entries.resize(k, k);
  for (int i = 0; i < k; ++i) {
    out.raw.row(i) = invariants[i].lambda_row.transpose();
    for (int j = 0; j < k; ++j) {
      const cplx v = out.raw(i, j);
      out.entries(i, j) = static_cast<int>(std::lround(v.real()));
      out.integrality_residual =
          std::max(out.integrality_residual, std::abs(v - cplx(out.entries(i, j), 0.0)));
    }
  }
  for (int j : rep.torus) out.torus_labels.push_back(rep.generators[j].label);

  Eigen::FullPivLU<CMatrix> lu(out.raw);
  lu.setThreshold(1e-8);
  if (lu.rank() != k) {
    throw Error(ErrorKind::SingularLambda,
                "Lambda has rank " + std::to_string(lu.rank()) + " < " + std::to_string(k));
  }
  return out;
}

cplx torus_loop_integral(const Representation& rep, int i, int j, int samples) {
  const auto polys = defining_polynomials(rep.family, rep.m);
  if (i < 0 || i >= static_cast<int>(polys.size()) || j < 0 || j >= rep.rank()) {
    throw Error(ErrorKind::InvalidArgument, "torus loop index out of range");
  }
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "too few samples");
  const CompiledPolynomial f(polys[i].poly);
  const unsigned degree = polys[i].poly.degree();
  const CMatrix base = structure_matrix(rep.family, rep.m);
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  std::vector<cplx> grad(rep.space.dim());

  // The integrand is periodic, so the trapezoid rule is a plain average.
  cplx sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / samples;
    const CMatrix a = act(exp_generator(rep, rep.torus[j], two_pi_i * t), base);
    const cplx value = f(coords_of(rep.space.encode(a)));
    if (!minor_is_nonzero(value, norm_inf(a), static_cast<int>(degree))) {
      throw Error(ErrorKind::PathHitsVariety,
                  "torus loop " + std::to_string(j + 1) + " meets the zero set of " +
                      polys[i].label,
                  {i + 1, j + 1});
    }
    // delta'(t) = 2 pi i xi_w(delta(t)); the 2 pi i cancels the normalization.
    sum += log_derivative(rep, f, rep.torus[j], a, grad);
  }
  return sum / static_cast<double>(samples);
}

CMatrix torus_loop_grid(const Representation& rep, int samples) {
  const int n = static_cast<int>(defining_minors(rep.family, rep.m).size());
  CMatrix out(n, rep.rank());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rep.rank(); ++j) out(i, j) = torus_loop_integral(rep, i, j, samples);
  }
  return out;
}

FiberReport fiber_relation_check(const Representation& rep, int points, int tangents_per_point,
                                 Rng& rng) {
  const auto polys = defining_polynomials(rep.family, rep.m);
  std::vector<CompiledPolynomial> fs;
  unsigned h_degree = 0;
  for (const auto& p : polys) {
    fs.emplace_back(p.poly);
    h_degree += p.poly.degree();
  }
  const int n = rep.space.dim();
  const CMatrix base = structure_matrix(rep.family, rep.m);
  FiberReport report;
  report.min_control = std::numeric_limits<double>::infinity();
  std::vector<cplx> grad(n);

  for (int p = 0; p < points; ++p) {
    // Random orbit point, rescaled onto h = 1.
    CVector v = rep.space.encode(act(random_group_element(rep.family, rep.m, rng), base));
    cplx h = 1.0;
    for (const auto& f : fs) h *= f(coords_of(v));
    v *= std::pow(1.0 / h, 1.0 / static_cast<double>(h_degree));

    // Logarithmic gradients; their sum is grad h / h.
    std::vector<CVector> log_grads;
    CVector total = CVector::Zero(n);
    double max_norm = 0.0;
    h = 1.0;
    for (const auto& f : fs) {
      const cplx value = f.value_and_gradient(coords_of(v), grad);
      h *= value;
      CVector g = Eigen::Map<CVector>(grad.data(), n) / value;
      max_norm = std::max(max_norm, g.norm());
      total += g;
      log_grads.push_back(std::move(g));
    }
    if (std::abs(h - 1.0) > 1e-8) {
      throw Error(ErrorKind::RelationViolated, "fiber point drifted off h = 1", {p + 1});
    }
    const double total_sq = total.squaredNorm();

    auto scaled_sum = [&](const CVector& u) {
      if (u.norm() == 0.0) return 0.0;
      cplx s = 0.0;
      for (const auto& g : log_grads) s += g.cwiseProduct(u).sum();
      return std::abs(s) / (u.norm() * max_norm);
    };

    for (int t = 0; t < tangents_per_point; ++t) {
      CVector u(n);
      for (int s = 0; s < n; ++s) u[s] = rng.complex_normal();
      // Remove the component along conj(total), the normal of ker dh.
      const cplx along = total.cwiseProduct(u).sum();
      const double before = u.norm();
      u -= total.conjugate() * (along / total_sq);
      // A one-dimensional space has no tangent directions on the fiber.
      if (u.norm() <= 1e-12 * before) u.setZero();
      const double r = scaled_sum(u);
      report.max_residual = std::max(report.max_residual, r);
      ++report.tangents;
      if (r > kFiberTolerance) {
        throw Error(ErrorKind::RelationViolated,
                    "sum of logarithmic differentials is " + std::to_string(r) +
                        " on a tangent vector",
                    {p + 1, t + 1});
      }
    }
    const double control = scaled_sum(total.conjugate());
    report.min_control = std::min(report.min_control, control);
    if (control <= kFiberTolerance) ++report.control_failures;
    ++report.points;
  }
  return report;
}

}  // namespace chol

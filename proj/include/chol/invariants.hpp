#pragma once

#include <string>
#include <vector>

#include "chol/blockrep.hpp"

namespace chol {

struct RelativeInvariant {
  std::string label;
  Polynomial f;
  // Infinitesimal character against the torus basis of the representation.
  CVector lambda_row;
};

// The defining polynomials in reporting order, with their infinitesimal
// characters.
std::vector<RelativeInvariant> basic_invariants(const Representation& rep, Rng& rng);

// lambda_j = df(xi_{w_j}) / f, required to agree at 20 random points.
// Throws NotConstant otherwise.
CVector infinitesimal_character(const Representation& rep, const Polynomial& f, Rng& rng);

struct InvarianceReport {
  // One ratio f(g v) / f(v) per sampled group element.
  std::vector<cplx> ratios;
};

// Throws InvarianceViolated if f(g v) / f(v) depends on v for some g.
InvarianceReport verify_relative_invariance(const Representation& rep, const Polynomial& f,
                                            int trials, Rng& rng);

struct LambdaMatrix {
  CMatrix raw;
  Eigen::MatrixXi entries;
  // max |raw - entries|
  double integrality_residual = 0.0;
  std::vector<std::string> torus_labels;
};

// Throws SingularLambda if the matrix is not square or not of full rank.
LambdaMatrix lambda_matrix(const Representation& rep, Rng& rng);

// (1 / 2 pi i) times the integral of df_i / f_i along t -> exp(2 pi i t w_j) K,
// K the structure matrix, by the trapezoid rule. Indices are 0-based.
cplx torus_loop_integral(const Representation& rep, int i, int j, int samples = 256);
CMatrix torus_loop_grid(const Representation& rep, int samples = 256);

struct FiberReport {
  int points = 0;
  int tangents = 0;
  // Largest |sum_i omega_i(u)| / (|u| max_i |grad f_i / f_i|) over tangent u.
  double max_residual = 0.0;
  // Smallest scaled value of the same sum along the normal direction.
  double min_control = 0.0;
  int control_failures = 0;
};

inline constexpr double kFiberTolerance = 1e-8;

// Samples points on h^-1(1), h the product of the basic invariants, and
// checks that sum_i df_i / f_i vanishes on tangent vectors. Throws
// RelationViolated on the first tangent vector that breaks it.
FiberReport fiber_relation_check(const Representation& rep, int points, int tangents_per_point,
                                 Rng& rng);

}  // namespace chol

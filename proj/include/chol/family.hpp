#pragma once

#include <functional>
#include <vector>

#include "chol/factor.hpp"

namespace chol {

// Closed discretized loop: samples[s] is the loop at t = s / (T - 1) and the
// last sample repeats the first.
struct MatrixLoop {
  Family kind;
  int m;
  std::vector<Point> samples;
};

// Parametrized curve t in [0, 1] -> matrix, used to sample loops and to
// refine them where the argument jumps are too large.
using LoopCurve = std::function<CMatrix(double)>;

MatrixLoop sample_loop(Family kind, int m, const LoopCurve& curve, int samples);

// Checks shape, closure and that every sample is in the open orbit (throws
// PathHitsVariety otherwise).
void validate_loop(const MatrixLoop& loop);

MatrixLoop concatenate(const MatrixLoop& a, const MatrixLoop& b);
MatrixLoop reversed(const MatrixLoop& loop);

struct Obstruction {
  std::vector<int> winding;
  std::vector<int> mod2;
};

inline constexpr int kMaxRefinementDepth = 16;

// Winding number of each basic invariant along the loop. Steps with an
// argument jump of pi/2 or more are bisected through `refine` when given;
// otherwise SamplingTooCoarse is thrown.
Obstruction winding_vector(const MatrixLoop& loop, const LoopCurve* refine = nullptr);

struct LiftCheck {
  bool liftable;
  Obstruction obstruction;
};

// LU and the modified kinds always lift; the congruence kinds lift iff every
// winding number is even.
LiftCheck liftable(const MatrixLoop& loop, const LoopCurve* refine = nullptr);

struct LiftResult {
  std::vector<Factorization> factors;
  // |B_T - B_0|_inf
  double closure_gap = 0.0;
  double max_step = 0.0;
  // max_step divided by the parameter spacing.
  double lipschitz = 0.0;
};

// Follows the factorization along the loop, choosing at each sample the
// normalization closest to the previous one. Does not require the result
// to close.
LiftResult continue_factorization(const MatrixLoop& loop, const FactorOptions& opts = {});

// continue_factorization plus the closure check; throws ClosureFailed when
// the endpoint factors differ by more than 1e-6 (1 + |B_0|_inf).
LiftResult lift_family(const MatrixLoop& loop, const FactorOptions& opts = {});

// t -> g_t K for a closed loop g_t in the group: the torus part winds with
// random integer speeds in [-2, 2], the remaining entries are random
// trigonometric polynomials vanishing at t = 0, so g_0 = I and every such
// loop is based at K.
LoopCurve random_group_loop(Family kind, int m, Rng& rng, int harmonics = 2);

}  // namespace chol

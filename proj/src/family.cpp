#include "chol/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chol/blockrep.hpp"

namespace chol {

namespace {

constexpr double kClosureTol = 1e-12;
constexpr double kLiftClosureTol = 1e-6;
constexpr int kMaxSignCandidates = 256;

std::vector<cplx> invariant_values(const std::vector<CompiledPolynomial>& fs, const Point& p) {
  const std::vector<cplx> coords(p.coords.data(), p.coords.data() + p.coords.size());
  std::vector<cplx> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(f(coords));
  return out;
}

Point loop_point(Family kind, int m, const CMatrix& a) {
  return Point::from_matrix(MatrixSpace::for_family(kind, m), a, 1e-10);
}

struct WindingState {
  const MatrixLoop& loop;
  const LoopCurve* refine;
  const std::vector<CompiledPolynomial>& fs;
  std::vector<double> total;
  int step = 0;

  void segment(double t0, double t1, const std::vector<cplx>& a, const std::vector<cplx>& b,
               int depth) {
    bool fine = true;
    std::vector<double> delta(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      delta[i] = std::arg(b[i] / a[i]);
      fine = fine && std::abs(delta[i]) < std::numbers::pi / 2;
    }
    if (fine) {
      for (std::size_t i = 0; i < a.size(); ++i) total[i] += delta[i];
      return;
    }
    if (refine == nullptr || depth >= kMaxRefinementDepth) {
      throw Error(ErrorKind::SamplingTooCoarse,
                  "argument jump of at least pi/2 between samples " + std::to_string(step) +
                      " and " + std::to_string(step + 1),
                  {step});
    }
    const double tm = 0.5 * (t0 + t1);
    const Point mid = loop_point(loop.kind, loop.m, (*refine)(tm));
    if (!in_open_orbit(mid, loop.kind)) {
      throw Error(ErrorKind::PathHitsVariety,
                  "refined loop leaves the open orbit near t = " + std::to_string(tm), {step});
    }
    const auto vm = invariant_values(fs, mid);
    segment(t0, tm, a, vm, depth + 1);
    segment(tm, t1, vm, b, depth + 1);
  }
};

// Normalizations that leave the factored matrix unchanged: diagonal signs
// for Sym, +-I on each 2 x 2 block for Skew.
std::vector<CVector> sign_candidates(Family kind, int m) {
  int free_signs = 0;
  if (kind == Family::CholeskySym) free_signs = m;
  if (kind == Family::CholeskySkew) free_signs = m / 2;
  const int count = 1 << free_signs;
  if (count > kMaxSignCandidates) {
    throw Error(ErrorKind::CapacityExceeded, "too many sign normalizations to search");
  }
  std::vector<CVector> out;
  for (int mask = 0; mask < count; ++mask) {
    CVector s = CVector::Ones(m);
    for (int b = 0; b < free_signs; ++b) {
      if (((mask >> b) & 1) == 0) continue;
      if (kind == Family::CholeskySym) {
        s[b] = -1.0;
      } else {
        s[2 * b] = -1.0;
        s[2 * b + 1] = -1.0;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

cplx trig(const std::vector<cplx>& a, const std::vector<cplx>& b, cplx c0, double t) {
  cplx v = c0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k + 1) * t;
    v += a[k] * std::cos(w) + b[k] * std::sin(w);
  }
  return v;
}

}  // namespace

MatrixLoop sample_loop(Family kind, int m, const LoopCurve& curve, int samples) {
  if (samples < 3) throw Error(ErrorKind::InvalidArgument, "a loop needs at least 3 samples");
  MatrixLoop loop{kind, m, {}};
  loop.samples.reserve(samples);
  for (int s = 0; s + 1 < samples; ++s) {
    loop.samples.push_back(loop_point(kind, m, curve(static_cast<double>(s) / (samples - 1))));
  }
  const CMatrix end = curve(1.0);
  const CMatrix start = loop.samples.front().matrix();
  if (norm_inf(end - start) > 1e-9 * (1.0 + norm_inf(start))) {
    throw Error(ErrorKind::InvalidArgument, "curve does not close");
  }
  loop.samples.push_back(loop.samples.front());
  return loop;
}

void validate_loop(const MatrixLoop& loop) {
  if (loop.samples.size() < 2) throw Error(ErrorKind::InvalidArgument, "loop has fewer than 2 samples");
  const MatrixSpace space = MatrixSpace::for_family(loop.kind, loop.m);
  for (std::size_t s = 0; s < loop.samples.size(); ++s) {
    if (!(loop.samples[s].space == space)) {
      throw Error(ErrorKind::ShapeMismatch,
                  "sample " + std::to_string(s) + " is not in " + space.name(),
                  {static_cast<int>(s)});
    }
    if (!in_open_orbit(loop.samples[s], loop.kind)) {
      throw Error(ErrorKind::PathHitsVariety,
                  "sample " + std::to_string(s) + " lies on the exceptional orbit variety",
                  {static_cast<int>(s)});
    }
  }
  const CMatrix first = loop.samples.front().matrix();
  if (norm_inf(loop.samples.back().matrix() - first) > kClosureTol * (1.0 + norm_inf(first))) {
    throw Error(ErrorKind::InvalidArgument, "loop is not closed");
  }
}

MatrixLoop concatenate(const MatrixLoop& a, const MatrixLoop& b) {
  if (a.kind != b.kind || a.m != b.m) throw Error(ErrorKind::ShapeMismatch, "loops differ in kind");
  const CMatrix base = a.samples.front().matrix();
  if (norm_inf(b.samples.front().matrix() - base) > kClosureTol * (1.0 + norm_inf(base))) {
    throw Error(ErrorKind::InvalidArgument, "loops have different base points");
  }
  MatrixLoop out = a;
  out.samples.insert(out.samples.end(), b.samples.begin() + 1, b.samples.end());
  return out;
}

MatrixLoop reversed(const MatrixLoop& loop) {
  MatrixLoop out = loop;
  std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

Obstruction winding_vector(const MatrixLoop& loop, const LoopCurve* refine) {
  validate_loop(loop);
  std::vector<CompiledPolynomial> fs;
  for (const auto& named : defining_polynomials(loop.kind, loop.m)) fs.emplace_back(named.poly);

  WindingState state{loop, refine, fs, std::vector<double>(fs.size(), 0.0)};
  const double last = static_cast<double>(loop.samples.size() - 1);
  auto prev = invariant_values(fs, loop.samples[0]);
  for (std::size_t s = 1; s < loop.samples.size(); ++s) {
    auto next = invariant_values(fs, loop.samples[s]);
    state.step = static_cast<int>(s - 1);
    state.segment((s - 1) / last, s / last, prev, next, 0);
    prev = std::move(next);
  }

  Obstruction out;
  for (double total : state.total) {
    const double turns = total / (2.0 * std::numbers::pi);
    const double n = std::round(turns);
    if (std::abs(turns - n) > 1e-6) {
      throw Error(ErrorKind::InvalidArgument, "accumulated argument is not a whole number of turns");
    }
    out.winding.push_back(static_cast<int>(n));
    out.mod2.push_back(((static_cast<int>(n) % 2) + 2) % 2);
  }
  return out;
}

LiftCheck liftable(const MatrixLoop& loop, const LoopCurve* refine) {
  LiftCheck out{true, winding_vector(loop, refine)};
  if (action_type(loop.kind) == ActionType::Congruence) {
    for (int bit : out.obstruction.mod2) out.liftable = out.liftable && bit == 0;
  }
  return out;
}

LiftResult continue_factorization(const MatrixLoop& loop, const FactorOptions& opts) {
  validate_loop(loop);
  const auto candidates = sign_candidates(loop.kind, loop.m);
  LiftResult out;
  out.factors.push_back(factor(loop.samples.front(), loop.kind, opts));
  for (std::size_t s = 1; s < loop.samples.size(); ++s) {
    Factorization f = factor(loop.samples[s], loop.kind, opts);
    const CMatrix& prev = out.factors.back().B;
    if (action_type(loop.kind) == ActionType::LeftRight) {
      // Unique factorization: nothing to choose.
      out.max_step = std::max(out.max_step, norm_inf(f.B - prev));
      out.factors.push_back(std::move(f));
      continue;
    }
    CMatrix best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const CVector& sign : candidates) {
      CMatrix b = f.B * sign.asDiagonal();
      const double d = norm_inf(b - prev);
      if (d < best_dist) {
        best_dist = d;
        best = std::move(b);
      }
    }
    f.B = std::move(best);
    out.max_step = std::max(out.max_step, best_dist);
    out.factors.push_back(std::move(f));
  }
  const Factorization& first = out.factors.front();
  const Factorization& end = out.factors.back();
  out.closure_gap = norm_inf(end.B - first.B);
  if (first.C && end.C) out.closure_gap = std::max(out.closure_gap, norm_inf(*end.C - *first.C));
  out.lipschitz = out.max_step * static_cast<double>(loop.samples.size() - 1);
  return out;
}

LiftResult lift_family(const MatrixLoop& loop, const FactorOptions& opts) {
  LiftResult out = continue_factorization(loop, opts);
  const double scale = norm_inf(out.factors.front().B);
  if (out.closure_gap > kLiftClosureTol * (1.0 + scale)) {
    throw Error(ErrorKind::ClosureFailed,
                "continued factorization ends " + std::to_string(out.closure_gap) +
                    " away from where it started");
  }
  return out;
}

LoopCurve random_group_loop(Family kind, int m, Rng& rng, int harmonics) {
  // Entry (i, j) of a factor: either a winding torus entry, a trigonometric
  // polynomial, a constant, or zero.
  struct Entry {
    enum Kind { Zero, One, Torus, Trig } kind = Zero;
    int speed = 0;
    cplx c0;
    std::vector<cplx> a, b;
  };
  using Pattern = std::vector<std::vector<Entry>>;

  auto trig_entry = [&] {
    Entry e{Entry::Trig, 0, 0.0, {}, {}};
    for (int k = 0; k < harmonics; ++k) {
      e.a.push_back(0.3 * rng.complex_normal());
      e.b.push_back(0.3 * rng.complex_normal());
      e.c0 -= e.a.back();
    }
    return e;
  };
  auto torus_entry = [&](int speed) { return Entry{Entry::Torus, speed, 0.0, {}, {}}; };

  const int ln = kind == Family::ModifiedRect ? m - 1 : m;
  Pattern left(ln, std::vector<Entry>(ln));
  if (kind == Family::CholeskySkew) {
    for (int b = 0; 2 * b + 1 < m; ++b) {
      const int speed = rng.uniform_int(-2, 2);
      left[2 * b][2 * b] = torus_entry(speed);
      left[2 * b + 1][2 * b + 1] = torus_entry(speed);
    }
    if (m % 2 == 1) left[m - 1][m - 1].kind = Entry::One;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i / 2 > j / 2) left[i][j] = trig_entry();
      }
    }
  } else {
    for (int i = 0; i < ln; ++i) {
      left[i][i] = torus_entry(rng.uniform_int(-2, 2));
      for (int j = 0; j < i; ++j) left[i][j] = trig_entry();
    }
  }

  Pattern right;
  if (action_type(kind) == ActionType::LeftRight) {
    right.assign(m, std::vector<Entry>(m));
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        if (kind == Family::LU) {
          if (i == j) {
            right[i][j].kind = Entry::One;
          } else {
            right[i][j] = trig_entry();
          }
        } else if (i == 0) {
          if (j == 0) right[i][j].kind = Entry::One;
        } else {
          right[i][j] = i == j ? torus_entry(rng.uniform_int(-2, 2)) : trig_entry();
        }
      }
    }
  }

  auto realize = [](const Pattern& p, double t) {
    const Eigen::Index n = static_cast<Eigen::Index>(p.size());
    CMatrix out = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const Entry& e = p[i][j];
        switch (e.kind) {
          case Entry::Zero: break;
          case Entry::One: out(i, j) = 1.0; break;
          case Entry::Torus:
            out(i, j) = std::exp(cplx(0.0, 2.0 * std::numbers::pi * e.speed * t));
            break;
          case Entry::Trig: out(i, j) = trig(e.a, e.b, e.c0, t); break;
        }
      }
    }
    return out;
  };

  const CMatrix base = structure_matrix(kind, m);
  return [=](double t) {
    const GroupElement g = right.empty()
                               ? GroupElement::make(kind, m, realize(left, t))
                               : GroupElement::make(kind, m, realize(left, t), realize(right, t));
    return act(g, base);
  };
}

}  // namespace chol

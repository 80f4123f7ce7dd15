#pragma once

// Path-ordered exponentials of a matrix-valued connection along a curve.
// Everything here solves dF/ds = A(s) F, F(s0) = 1, so later parameter
// values multiply from the left.

#include <array>
#include <functional>

#include "opgeom/algebra.hpp"
#include "opgeom/chart.hpp"

namespace opgeom {

/// A(s) already contracted with the curve tangent, on [s0, s1]. s1 < s0 is
/// allowed and integrates backwards.
struct ConnectionPath {
  std::function<Element(double)> a;
  double s0 = 0.0;
  double s1 = 1.0;
  int n_steps = 1000;
};

inline constexpr int kMaxSeriesOrder = 6;

/// 1 + sum_{j <= k} of the iterated integrals
/// int_{s0 < t_1 < ... < t_j < s} A(t_j) ... A(t_1), each level by the
/// composite trapezoid rule on n_steps intervals. OrderTooLargeError for
/// k > 6.
Element ordered_series(const ConnectionPath& path, int order);

/// Ordered product of exp(A(midpoint) ds) over n_steps equal pieces.
Element product_integral(const ConnectionPath& path);

/// Adaptive Dormand-Prince 5(4) solution of dF/ds = A F with local
/// tolerance 1e-12. StiffnessError if the step size underflows.
Element transport_oracle(const ConnectionPath& path);
Element transport_oracle(const ConnectionPath& path, const Element& f0);

/// Connection one-form A = A_1 du^1 + A_2 du^2 on a two-parameter patch.
struct PatchConnection {
  std::function<std::array<Element, 2>(const RVector&)> a;
  ParamBox domain;  // empty bounds mean the whole plane
};

/// Square loop of side eps centred on `base`, spanned by dir1 then dir2
/// (counter-clockwise when dir1 x dir2 > 0).
struct LoopSpec {
  RVector base;
  RVector dir1;
  RVector dir2;
  double eps = 0.1;
};

struct StokesResult {
  Element holonomy;    // transport around the loop
  Element curvature;   // F(dir1, dir2) at the base point
  double residual = 0.0;  // |holonomy - exp(eps^2 F)|, Frobenius
};

/// Holonomy of the small loop against exp(eps^2 F) with
/// F_12 = d_1 A_2 - d_2 A_1 + [A_1, A_2]. The holonomy is ordered with
/// earlier loop segments on the left, which is the ordering under which this
/// F is the leading term. PatchDomainError if the loop or the difference
/// stencil leaves the patch.
StokesResult stokes(const PatchConnection& field, const LoopSpec& loop, int steps_per_side = 256);
double stokes_residual(const PatchConnection& field, const LoopSpec& loop,
                       int steps_per_side = 256);

/// max |D_l R^a_{bmn} + D_m R^a_{bnl} + D_n R^a_{blm}| over all indices,
/// covariant derivatives by central differences of curvature() with the
/// chart's outer step. For p = 2 the cyclic sum vanishes identically by
/// antisymmetry in (m, n).
double bianchi_residual(const Chart& chart, const State& phi, const DotConfig& cfg,
                        const RVector& u);

}  // namespace opgeom

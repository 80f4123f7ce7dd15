#pragma once

// Finite-difference differential geometry of a chart u -> b(u) inside the
// algebra, with the dot product of a fixed state.
//
// Index conventions (used by every component array in this header):
//   Tensor3 gamma(a, r, s)       = Gamma^a_{r s}      (upper index first)
//   Tensor4 riemann(a, b, m, n)  = R^a_{b m n}        antisymmetric in (m, n)
//   R^a_{bmn} = d_m Gamma^a_{nb} - d_n Gamma^a_{mb}
//             + Gamma^a_{mr} Gamma^r_{nb} - Gamma^a_{nr} Gamma^r_{mb}
//   so that (D_m D_n - D_n D_m) V^a = R^a_{bmn} V^b.
//   RMatrix D from covariant_derivative: D(a, b) = D_a V^b.

#include <functional>
#include <vector>

#include "opgeom/algebra.hpp"
#include "opgeom/chart.hpp"

namespace opgeom {

/// Dense p x p x p array.
class Tensor3 {
 public:
  explicit Tensor3(Eigen::Index p = 0) : p_(p), data_(static_cast<std::size_t>(p * p * p), 0.0) {}
  Eigen::Index p() const noexcept { return p_; }
  double& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return data_[static_cast<std::size_t>((i * p_ + j) * p_ + k)];
  }
  double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[static_cast<std::size_t>((i * p_ + j) * p_ + k)];
  }
  const std::vector<double>& data() const noexcept { return data_; }
  double max_abs() const;
  /// Largest |this - other| over all components.
  double max_diff(const Tensor3& other) const;

 private:
  Eigen::Index p_;
  std::vector<double> data_;
};

/// Dense p^4 array.
class Tensor4 {
 public:
  explicit Tensor4(Eigen::Index p = 0)
      : p_(p), data_(static_cast<std::size_t>(p * p * p * p), 0.0) {}
  Eigen::Index p() const noexcept { return p_; }
  double& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) {
    return data_[static_cast<std::size_t>(((i * p_ + j) * p_ + k) * p_ + l)];
  }
  double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const {
    return data_[static_cast<std::size_t>(((i * p_ + j) * p_ + k) * p_ + l)];
  }
  const std::vector<double>& data() const noexcept { return data_; }
  double max_abs() const;
  double max_diff(const Tensor4& other) const;

 private:
  Eigen::Index p_;
  std::vector<double> data_;
};

struct TangentBasis {
  std::vector<Element> vectors;  // b_alpha = d b / d u^alpha
  bool full_rank = false;
};

struct MetricField {
  RMatrix g;
  RMatrix g_inv;
};

using ConnectionField = Tensor3;
using CurvatureField = Tensor4;

enum class ChristoffelMethod { Direct, Metric };

/// Central-difference tangent vectors. EvaluationError if u is outside the
/// chart domain, StencilOutOfDomainError if a stencil point is.
TangentBasis tangent_basis(const Chart& chart, const State& phi, const DotConfig& cfg,
                           const RVector& u);

/// g_ab = b_a . b_b with its inverse. SingularMetricError if degenerate.
/// A lambda-deformed DotConfig may give a non-symmetric g.
MetricField metric(const Chart& chart, const State& phi, const DotConfig& cfg, const RVector& u);

/// b_a g^{ab} (b_b . a): projection of `a` onto the tangent plane.
Element projector_apply(const Chart& chart, const State& phi, const DotConfig& cfg,
                        const RVector& u, const Element& a);

/// Direct: g^{ab} b_b . d_r d_s b from second chart differences.
/// Metric: (1/2) g^{ab} (d_r g_bs - d_b g_rs + d_s g_rb) from differences of
/// metric(). Both refuse a non-symmetric metric.
ConnectionField christoffel(const Chart& chart, const State& phi, const DotConfig& cfg,
                            const RVector& u, ChristoffelMethod method = ChristoffelMethod::Direct);

/// max |d_c g_ab - Gamma^r_{ca} g_rb - Gamma^r_{cb} g_ar| with the direct
/// connection.
double metric_compat_residual(const Chart& chart, const State& phi, const DotConfig& cfg,
                              const RVector& u);

CurvatureField curvature(const Chart& chart, const State& phi, const DotConfig& cfg,
                         const RVector& u);

/// Gaussian curvature R_{1212} / det g of a two-parameter chart.
double gaussian_curvature(const CurvatureField& r, const MetricField& m);

using VectorField = std::function<RVector(const RVector&)>;

/// D(a, b) = d_a V^b + Gamma^b_{ad} V^d.
RMatrix covariant_derivative(const Chart& chart, const State& phi, const DotConfig& cfg,
                             const RVector& u, const VectorField& v);

/// DD(m, n, a) = D_m D_n V^a (covariant derivative of the (1,1) field D).
Tensor3 second_covariant_derivative(const Chart& chart, const State& phi, const DotConfig& cfg,
                                    const RVector& u, const VectorField& v);

struct GeodesicState {
  double tau = 0.0;
  RVector u;
  RVector udot;
};

struct GeodesicResult {
  std::vector<GeodesicState> states;  // initial state plus one per step
  bool left_domain = false;           // integration stopped at the chart edge
};

/// Classical RK4 for u'' = -Gamma(u)(u', u') in the affine parameter.
/// The step is adjusted down so the last state lands on tau_max exactly.
GeodesicResult geodesic(const Chart& chart, const State& phi, const DotConfig& cfg,
                        const RVector& u0, const RVector& v0, double tau_max, double step);

/// g_ab(u) udot^a udot^b.
double geodesic_speed(const Chart& chart, const State& phi, const DotConfig& cfg,
                      const GeodesicState& s);

struct OrthonormalFrame {
  std::vector<Element> frame;  // Gram-Schmidt of the tangent basis
  Tensor3 connection;          // connection(a, b, c) = hat b_a . d_c hat b_b
};

OrthonormalFrame orthonormal_frame(const Chart& chart, const State& phi, const DotConfig& cfg,
                                   const RVector& u);

/// (d_1 hat b_1 . d_2 hat b_2 - d_2 hat b_1 . d_1 hat b_2) / sqrt(det g).
/// DimensionError unless p = 2.
double gauss_curvature_2d(const Chart& chart, const State& phi, const DotConfig& cfg,
                          const RVector& u);

/// f(a, b) = -g^{ar} b_r . b'_b in the Gibbs state of H at inverse
/// temperature beta, with b'_b = (i/hbar)[H, b_b].
RMatrix gibbs_force(const PhysConstants& consts, const std::vector<Element>& tangents,
                    const Element& hamiltonian, double beta);

/// Killing-type metric g_ab = (1/2d) Tr(ad_a^dag ad_b + ad_b^dag ad_a) from
/// structure constants f[(r * d + a) * d + b] = f^r_{ab}.
/// JacobiViolationError if the Jacobi identity fails by more than 1e-10,
/// DomainError if f is not antisymmetric in its lower pair.
RMatrix killing_metric(const std::vector<double>& structure_constants, int d);

/// |P(t1 t2) - t1 t2| in the state norm, for the tangent pair (b_1, b_2).
double leibniz_violation_witness(const Chart& chart, const State& phi, const DotConfig& cfg,
                                 const RVector& u);
/// Same for an explicit tangent pair.
double leibniz_violation_witness(const Chart& chart, const State& phi, const DotConfig& cfg,
                                 const RVector& u, const Element& t1, const Element& t2);

}  // namespace opgeom

#include "opgeom/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opgeom/errors.hpp"
#include "opgeom/projection.hpp"

namespace opgeom {

// ---------------------------------------------------------------------------
// Tensors

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor3::max_diff(const Tensor3& other) const {
  if (other.p_ != p_) throw DimensionError("Tensor3 size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_diff(const Tensor4& other) const {
  if (other.p_ != p_) throw DimensionError("Tensor4 size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

namespace {

RVector shifted(const RVector& u, Eigen::Index k, double h) {
  RVector v = u;
  v(k) += h;
  return v;
}

void require_interior(const Chart& chart, const RVector& u) {
  if (u.size() != chart.p()) {
    throw DimensionError("point has " + std::to_string(u.size()) + " coordinates, chart has " +
                         std::to_string(chart.p()));
  }
  if (!chart.contains(u)) throw EvaluationError("point outside the " + chart.id() + " chart domain");
}

Element stencil_eval(const Chart& chart, const RVector& u) {
  if (!chart.contains(u)) {
    throw StencilOutOfDomainError("finite-difference stencil leaves the " + chart.id() + " chart");
  }
  return chart(u);
}

std::vector<Element> tangents(const Chart& chart, const RVector& u) {
  require_interior(chart, u);
  const double h = chart.steps().first;
  std::vector<Element> b;
  b.reserve(static_cast<std::size_t>(chart.p()));
  for (Eigen::Index k = 0; k < chart.p(); ++k) {
    b.push_back((stencil_eval(chart, shifted(u, k, h)) - stencil_eval(chart, shifted(u, k, -h))) /
                (2.0 * h));
  }
  return b;
}

MetricField metric_of(const State& phi, const DotConfig& cfg, const std::vector<Element>& b) {
  const auto p = static_cast<Eigen::Index>(b.size());
  RMatrix g(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      g(i, j) = rdot(phi, cfg, b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
  const GramMatrix gm = gram_from_matrix(g);
  if (!gm.is_full_rank) throw SingularMetricError("induced metric is degenerate");
  return {gm.m, gm.inverse_or_pseudo};
}

void require_symmetric(const RMatrix& g) {
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NonSymmetricMetricError("connection needs a symmetric metric");
  }
}

/// d_r d_s b for all pairs (symmetric), central differences with step h.
std::vector<Element> second_derivatives(const Chart& chart, const RVector& u, double h) {
  const Eigen::Index p = chart.p();
  std::vector<Element> out(static_cast<std::size_t>(p * p));
  const Element center = stencil_eval(chart, u);
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index s = r; s < p; ++s) {
      Element d;
      if (r == s) {
        d = (stencil_eval(chart, shifted(u, r, h)) - 2.0 * center +
             stencil_eval(chart, shifted(u, r, -h))) /
            (h * h);
      } else {
        const RVector pp = shifted(shifted(u, r, h), s, h);
        const RVector pm = shifted(shifted(u, r, h), s, -h);
        const RVector mp = shifted(shifted(u, r, -h), s, h);
        const RVector mm = shifted(shifted(u, r, -h), s, -h);
        d = (stencil_eval(chart, pp) - stencil_eval(chart, pm) - stencil_eval(chart, mp) +
             stencil_eval(chart, mm)) /
            (4.0 * h * h);
      }
      out[static_cast<std::size_t>(r * p + s)] = d;
      out[static_cast<std::size_t>(s * p + r)] = std::move(d);
    }
  }
  return out;
}

/// Metric at u +- h e_c for every c, differenced.
std::vector<RMatrix> metric_gradient(const Chart& chart, const State& phi, const DotConfig& cfg,
                                     const RVector& u, double h) {
  std::vector<RMatrix> dg;
  for (Eigen::Index c = 0; c < chart.p(); ++c) {
    const RVector up = shifted(u, c, h);
    const RVector dn = shifted(u, c, -h);
    if (!chart.contains(up) || !chart.contains(dn)) {
      throw StencilOutOfDomainError("metric stencil leaves the " + chart.id() + " chart");
    }
    dg.push_back((metric(chart, phi, cfg, up).g - metric(chart, phi, cfg, dn).g) / (2.0 * h));
  }
  return dg;
}

ConnectionField christoffel_direct(const Chart& chart, const State& phi, const DotConfig& cfg,
                                   const RVector& u) {
  const auto b = tangents(chart, u);
  const MetricField m = metric_of(phi, cfg, b);
  require_symmetric(m.g);
  const Eigen::Index p = chart.p();
  const auto b2 = second_derivatives(chart, u, chart.steps().second);

  // lowered(b, r, s) = b_b . b_rs
  Tensor3 lowered(p);
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index s = r; s < p; ++s) {
        const double v = rdot(phi, cfg, b[static_cast<std::size_t>(k)],
                              b2[static_cast<std::size_t>(r * p + s)]);
        lowered(k, r, s) = v;
        lowered(k, s, r) = v;
      }
  Tensor3 gamma(p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index s = 0; s < p; ++s) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < p; ++k) acc += m.g_inv(a, k) * lowered(k, r, s);
        gamma(a, r, s) = acc;
      }
  return gamma;
}

ConnectionField christoffel_metric(const Chart& chart, const State& phi, const DotConfig& cfg,
                                   const RVector& u) {
  const MetricField m = metric(chart, phi, cfg, u);
  require_symmetric(m.g);
  const auto dg = metric_gradient(chart, phi, cfg, u, chart.steps().second);
  const Eigen::Index p = chart.p();
  Tensor3 gamma(p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index s = 0; s < p; ++s) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < p; ++k) {
          const auto kk = static_cast<std::size_t>(k);
          const auto rr = static_cast<std::size_t>(r);
          const auto ss = static_cast<std::size_t>(s);
          acc += m.g_inv(a, k) * (dg[rr](k, s) - dg[kk](r, s) + dg[ss](r, k));
        }
        gamma(a, r, s) = 0.5 * acc;
      }
  return gamma;
}

std::vector<Element> frame_at(const Chart& chart, const State& phi, const DotConfig& cfg,
                              const RVector& u) {
  return gram_schmidt(phi, cfg, tangents(chart, u)).orthonormal;
}

/// dframe[c][b] = d_c hat b_b by central differences with step h.
std::vector<std::vector<Element>> frame_gradient(const Chart& chart, const State& phi,
                                                 const DotConfig& cfg, const RVector& u,
                                                 double h) {
  std::vector<std::vector<Element>> out;
  for (Eigen::Index c = 0; c < chart.p(); ++c) {
    const RVector up = shifted(u, c, h);
    const RVector dn = shifted(u, c, -h);
    if (!chart.contains(up) || !chart.contains(dn)) {
      throw StencilOutOfDomainError("frame stencil leaves the " + chart.id() + " chart");
    }
    const auto fp = frame_at(chart, phi, cfg, up);
    const auto fm = frame_at(chart, phi, cfg, dn);
    std::vector<Element> d;
    for (std::size_t b = 0; b < fp.size(); ++b) d.push_back((fp[b] - fm[b]) / (2.0 * h));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

TangentBasis tangent_basis(const Chart& chart, const State& phi, const DotConfig& cfg,
                           const RVector& u) {
  TangentBasis out;
  out.vectors = tangents(chart, u);
  out.full_rank = gram(phi, cfg, out.vectors).is_full_rank;
  return out;
}

MetricField metric(const Chart& chart, const State& phi, const DotConfig& cfg, const RVector& u) {
  return metric_of(phi, cfg, tangents(chart, u));
}

Element projector_apply(const Chart& chart, const State& phi, const DotConfig& cfg,
                        const RVector& u, const Element& a) {
  const auto b = tangents(chart, u);
  const MetricField m = metric_of(phi, cfg, b);
  const auto p = static_cast<Eigen::Index>(b.size());
  RVector n(p);
  for (Eigen::Index k = 0; k < p; ++k) n(k) = rdot(phi, cfg, b[static_cast<std::size_t>(k)], a);
  const RVector c = m.g_inv * n;
  Element out = Element::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < p; ++k) out += c(k) * b[static_cast<std::size_t>(k)];
  return out;
}

ConnectionField christoffel(const Chart& chart, const State& phi, const DotConfig& cfg,
                            const RVector& u, ChristoffelMethod method) {
  return method == ChristoffelMethod::Direct ? christoffel_direct(chart, phi, cfg, u)
                                             : christoffel_metric(chart, phi, cfg, u);
}

double metric_compat_residual(const Chart& chart, const State& phi, const DotConfig& cfg,
                              const RVector& u) {
  const MetricField m = metric(chart, phi, cfg, u);
  const Tensor3 gamma = christoffel_direct(chart, phi, cfg, u);
  const auto dg = metric_gradient(chart, phi, cfg, u, chart.steps().second);
  const Eigen::Index p = chart.p();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < p; ++c)
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = 0; b < p; ++b) {
        double rhs = 0.0;
        for (Eigen::Index r = 0; r < p; ++r) {
          rhs += gamma(r, c, a) * m.g(r, b) + gamma(r, c, b) * m.g(a, r);
        }
        worst = std::max(worst, std::abs(dg[static_cast<std::size_t>(c)](a, b) - rhs));
      }
  return worst;
}

CurvatureField curvature(const Chart& chart, const State& phi, const DotConfig& cfg,
                         const RVector& u) {
  const Eigen::Index p = chart.p();
  const double h = chart.steps().outer;
  const Tensor3 gamma = christoffel_direct(chart, phi, cfg, u);
  std::vector<Tensor3> dgamma;
  for (Eigen::Index m = 0; m < p; ++m) {
    const Tensor3 up = christoffel_direct(chart, phi, cfg, shifted(u, m, h));
    const Tensor3 dn = christoffel_direct(chart, phi, cfg, shifted(u, m, -h));
    Tensor3 d(p);
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index r = 0; r < p; ++r)
        for (Eigen::Index s = 0; s < p; ++s) d(a, r, s) = (up(a, r, s) - dn(a, r, s)) / (2.0 * h);
    dgamma.push_back(std::move(d));
  }

  Tensor4 riemann(p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b)
      for (Eigen::Index m = 0; m < p; ++m)
        for (Eigen::Index n = 0; n < p; ++n) {
          double v = dgamma[static_cast<std::size_t>(m)](a, n, b) -
                     dgamma[static_cast<std::size_t>(n)](a, m, b);
          for (Eigen::Index r = 0; r < p; ++r) {
            v += gamma(a, m, r) * gamma(r, n, b) - gamma(a, n, r) * gamma(r, m, b);
          }
          riemann(a, b, m, n) = v;
        }
  return riemann;
}

double gaussian_curvature(const CurvatureField& r, const MetricField& m) {
  if (r.p() != 2 || m.g.rows() != 2) throw DimensionError("Gaussian curvature needs p = 2");
  double r0101 = 0.0;
  for (Eigen::Index a = 0; a < 2; ++a) r0101 += m.g(0, a) * r(a, 1, 0, 1);
  return r0101 / m.g.determinant();
}

RMatrix covariant_derivative(const Chart& chart, const State& phi, const DotConfig& cfg,
                             const RVector& u, const VectorField& v) {
  const Eigen::Index p = chart.p();
  const double h = chart.steps().first;
  const Tensor3 gamma = christoffel_direct(chart, phi, cfg, u);
  const RVector v0 = v(u);
  if (v0.size() != p) throw DimensionError("vector field has the wrong number of components");
  RMatrix d(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    const RVector dv = (v(shifted(u, a, h)) - v(shifted(u, a, -h))) / (2.0 * h);
    for (Eigen::Index b = 0; b < p; ++b) {
      double acc = dv(b);
      for (Eigen::Index k = 0; k < p; ++k) acc += gamma(b, a, k) * v0(k);
      d(a, b) = acc;
    }
  }
  return d;
}

Tensor3 second_covariant_derivative(const Chart& chart, const State& phi, const DotConfig& cfg,
                                    const RVector& u, const VectorField& v) {
  const Eigen::Index p = chart.p();
  const double h = chart.steps().outer;
  const Tensor3 gamma = christoffel_direct(chart, phi, cfg, u);
  const RMatrix d0 = covariant_derivative(chart, phi, cfg, u, v);
  Tensor3 out(p);
  for (Eigen::Index m = 0; m < p; ++m) {
    const RMatrix dd = (covariant_derivative(chart, phi, cfg, shifted(u, m, h), v) -
                        covariant_derivative(chart, phi, cfg, shifted(u, m, -h), v)) /
                       (2.0 * h);
    for (Eigen::Index n = 0; n < p; ++n)
      for (Eigen::Index a = 0; a < p; ++a) {
        double acc = dd(n, a);
        for (Eigen::Index r = 0; r < p; ++r) {
          acc += gamma(a, m, r) * d0(n, r) - gamma(r, m, n) * d0(r, a);
        }
        out(m, n, a) = acc;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geodesics

namespace {

RVector geodesic_accel(const Chart& chart, const State& phi, const DotConfig& cfg,
                       const RVector& u, const RVector& v) {
  if (!chart.contains(u)) throw StencilOutOfDomainError("geodesic left the chart");
  const Tensor3 gamma = christoffel_direct(chart, phi, cfg, u);
  const Eigen::Index p = chart.p();
  RVector a = RVector::Zero(p);
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index s = 0; s < p; ++s) a(k) -= gamma(k, r, s) * v(r) * v(s);
  return a;
}

}  // namespace

GeodesicResult geodesic(const Chart& chart, const State& phi, const DotConfig& cfg,
                        const RVector& u0, const RVector& v0, double tau_max, double step) {
  require_interior(chart, u0);
  if (v0.size() != chart.p()) throw DimensionError("initial velocity has the wrong size");
  if (v0.norm() == 0.0) throw DomainError("geodesic needs a nonzero initial velocity");
  if (!(tau_max > 0.0) || !(step > 0.0)) throw DomainError("tau_max and step must be positive");
  {
    const MetricField m = metric(chart, phi, cfg, u0);
    require_symmetric(m.g);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(m.g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= 0.0) throw DomainError("geodesics need a positive-definite metric");
  }

  const auto n = static_cast<long>(std::ceil(tau_max / step - 1e-9));
  const double h = tau_max / static_cast<double>(n);

  GeodesicResult out;
  out.states.reserve(static_cast<std::size_t>(n) + 1);
  out.states.push_back({0.0, u0, v0});
  RVector u = u0;
  RVector v = v0;
  for (long i = 1; i <= n; ++i) {
    try {
      const RVector k1u = v;
      const RVector k1v = geodesic_accel(chart, phi, cfg, u, v);
      const RVector k2u = v + 0.5 * h * k1v;
      const RVector k2v = geodesic_accel(chart, phi, cfg, u + 0.5 * h * k1u, k2u);
      const RVector k3u = v + 0.5 * h * k2v;
      const RVector k3v = geodesic_accel(chart, phi, cfg, u + 0.5 * h * k2u, k3u);
      const RVector k4u = v + h * k3v;
      const RVector k4v = geodesic_accel(chart, phi, cfg, u + h * k3u, k4u);
      const RVector un = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      const RVector vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      if (!chart.contains(un)) throw StencilOutOfDomainError("geodesic left the chart");
      u = un;
      v = vn;
    } catch (const StencilOutOfDomainError&) {
      out.left_domain = true;
      break;
    } catch (const EvaluationError&) {
      out.left_domain = true;
      break;
    }
    out.states.push_back({static_cast<double>(i) * h, u, v});
  }
  return out;
}

double geodesic_speed(const Chart& chart, const State& phi, const DotConfig& cfg,
                      const GeodesicState& s) {
  const MetricField m = metric(chart, phi, cfg, s.u);
  return s.udot.dot(m.g * s.udot);
}

// ---------------------------------------------------------------------------
// Orthonormal frames

OrthonormalFrame orthonormal_frame(const Chart& chart, const State& phi, const DotConfig& cfg,
                                   const RVector& u) {
  const Eigen::Index p = chart.p();
  OrthonormalFrame out;
  out.frame = frame_at(chart, phi, cfg, u);
  const auto dframe = frame_gradient(chart, phi, cfg, u, chart.steps().second);
  out.connection = Tensor3(p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b)
      for (Eigen::Index c = 0; c < p; ++c) {
        out.connection(a, b, c) =
            rdot(phi, cfg, out.frame[static_cast<std::size_t>(a)],
                 dframe[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)]);
      }
  return out;
}

double gauss_curvature_2d(const Chart& chart, const State& phi, const DotConfig& cfg,
                          const RVector& u) {
  if (chart.p() != 2) throw DimensionError("gauss_curvature_2d needs a two-parameter chart");
  const MetricField m = metric(chart, phi, cfg, u);
  const auto d = frame_gradient(chart, phi, cfg, u, chart.steps().second);
  const double r12 = rdot(phi, cfg, d[0][0], d[1][1]) - rdot(phi, cfg, d[1][0], d[0][1]);
  return r12 / std::sqrt(m.g.determinant());
}

// ---------------------------------------------------------------------------

RMatrix gibbs_force(const PhysConstants& consts, const std::vector<Element>& tangents,
                    const Element& hamiltonian, double beta) {
  const State omega = State::gibbs(hamiltonian, beta);
  const DotConfig cfg;
  const GramMatrix g = gram(omega, cfg, tangents);
  if (!g.is_full_rank) throw SingularGramError("tangent operators are dependent in the Gibbs state");
  const auto p = static_cast<Eigen::Index>(tangents.size());
  RMatrix cross(p, p);  // cross(r, b) = b_r . b'_b
  for (Eigen::Index b = 0; b < p; ++b) {
    const Element rate = heisenberg_dot(consts, hamiltonian, tangents[static_cast<std::size_t>(b)]);
    for (Eigen::Index r = 0; r < p; ++r) {
      cross(r, b) = rdot(omega, cfg, tangents[static_cast<std::size_t>(r)], rate);
    }
  }
  return -g.inverse_or_pseudo * cross;
}

RMatrix killing_metric(const std::vector<double>& f, int d) {
  if (d < 1) throw DomainError("Lie algebra dimension must be positive");
  const auto n = static_cast<std::size_t>(d);
  if (f.size() != n * n * n) {
    throw DimensionError("expected " + std::to_string(n * n * n) + " structure constants, got " +
                         std::to_string(f.size()));
  }
  auto at = [&](int r, int a, int b) {
    return f[(static_cast<std::size_t>(r) * n + static_cast<std::size_t>(a)) * n +
             static_cast<std::size_t>(b)];
  };
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  for (int r = 0; r < d; ++r)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (std::abs(at(r, a, b) + at(r, b, a)) > 1e-12 * std::max(1.0, scale)) {
          throw DomainError("structure constants are not antisymmetric");
        }
  // [[J_a, J_b], J_c] + cyclic = 0
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int t = 0; t < d; ++t) {
          double s = 0.0;
          for (int k = 0; k < d; ++k) {
            s += at(k, a, b) * at(t, k, c) + at(k, b, c) * at(t, k, a) + at(k, c, a) * at(t, k, b);
          }
          if (std::abs(s) > 1e-10) throw JacobiViolationError("structure constants violate Jacobi");
        }

  std::vector<RMatrix> ad(n, RMatrix(d, d));
  for (int a = 0; a < d; ++a)
    for (int r = 0; r < d; ++r)
      for (int b = 0; b < d; ++b) ad[static_cast<std::size_t>(a)](r, b) = at(r, a, b);

  RMatrix g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const auto& x = ad[static_cast<std::size_t>(a)];
      const auto& y = ad[static_cast<std::size_t>(b)];
      g(a, b) = ((x.transpose() * y).trace() + (y.transpose() * x).trace()) / (2.0 * d);
    }
  return g;
}

double leibniz_violation_witness(const Chart& chart, const State& phi, const DotConfig& cfg,
                                 const RVector& u, const Element& t1, const Element& t2) {
  const Element prod = t1 * t2;
  const Element diff = projector_apply(chart, phi, cfg, u, prod) - prod;
  return std::sqrt(std::max(0.0, rdot(phi, cfg, diff, diff)));
}

double leibniz_violation_witness(const Chart& chart, const State& phi, const DotConfig& cfg,
                                 const RVector& u) {
  if (chart.p() < 2) throw DimensionError("Leibniz witness needs two tangent directions");
  const auto b = tangents(chart, u);
  return leibniz_violation_witness(chart, phi, cfg, u, b[0], b[1]);
}

}  // namespace opgeom

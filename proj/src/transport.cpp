#include "opgeom/transport.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "opgeom/errors.hpp"
#include "opgeom/hypersurface.hpp"

namespace opgeom {

namespace {

Element sample(const ConnectionPath& path, double s, Eigen::Index& n) {
  Element a = path.a(s);
  if (a.rows() != a.cols()) throw DimensionError("connection must be square");
  if (!a.allFinite()) throw DomainError("connection sample is not finite");
  if (n == 0) {
    n = a.rows();
  } else if (a.rows() != n) {
    throw DimensionError("connection changes dimension along the path");
  }
  return a;
}

void check_path(const ConnectionPath& path) {
  if (!path.a) throw InputError("connection path has no connection");
  if (path.n_steps < 1) throw DomainError("n_steps must be at least 1");
  if (!std::isfinite(path.s0) || !std::isfinite(path.s1)) {
    throw DomainError("path interval must be finite");
  }
}

}  // namespace

Element ordered_series(const ConnectionPath& path, int order) {
  check_path(path);
  if (order < 0) throw DomainError("series order must be non-negative");
  if (order > kMaxSeriesOrder) {
    throw OrderTooLargeError("series order " + std::to_string(order) + " exceeds " +
                             std::to_string(kMaxSeriesOrder));
  }
  const int n = path.n_steps;
  const double ds = (path.s1 - path.s0) / n;
  Eigen::Index dim = 0;
  std::vector<Element> a;
  a.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) a.push_back(sample(path, path.s0 + i * ds, dim));

  const Element id = Element::Identity(dim, dim);
  Element sum = id;
  std::vector<Element> prev(static_cast<std::size_t>(n) + 1, id);
  std::vector<Element> next(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= order; ++j) {
    Element g_prev = a[0] * prev[0];
    next[0] = Element::Zero(dim, dim);
    for (int i = 1; i <= n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      Element g = a[ii] * prev[ii];
      next[ii] = next[ii - 1] + (0.5 * ds) * (g_prev + g);
      g_prev = std::move(g);
    }
    sum += next.back();
    std::swap(prev, next);
  }
  return sum;
}

Element product_integral(const ConnectionPath& path) {
  check_path(path);
  const int n = path.n_steps;
  const double ds = (path.s1 - path.s0) / n;
  Eigen::Index dim = 0;
  Element f;
  for (int k = 0; k < n; ++k) {
    const Element step = (sample(path, path.s0 + (k + 0.5) * ds, dim) * ds).exp();
    f = k == 0 ? step : Element(step * f);
  }
  return f;
}

Element transport_oracle(const ConnectionPath& path) {
  check_path(path);
  Eigen::Index dim = 0;
  sample(path, path.s0, dim);
  return transport_oracle(path, Element::Identity(dim, dim));
}

Element transport_oracle(const ConnectionPath& path, const Element& f0) {
  check_path(path);
  check_element(f0);
  constexpr double kTol = 1e-12;
  // Dormand-Prince tableau.
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double e[7] = {35.0 / 384 - 5179.0 / 57600,
                                  0.0,
                                  500.0 / 1113 - 7571.0 / 16695,
                                  125.0 / 192 - 393.0 / 640,
                                  -2187.0 / 6784 + 92097.0 / 339200,
                                  11.0 / 84 - 187.0 / 2100,
                                  -1.0 / 40};

  const double span = path.s1 - path.s0;
  Element f = f0;
  if (span == 0.0) return f;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double length = std::abs(span);
  Eigen::Index dim = f0.rows();

  double s = 0.0;  // distance travelled from s0
  double h = length / 64.0;
  Element k[7];
  bool have_first = false;
  long steps = 0;
  while (s < length) {
    if (++steps > 20'000'000) throw StiffnessError("transport oracle exceeded its step budget");
    const bool last = s + h >= length;
    if (last) h = length - s;
    if (h < 1e-14 * std::max(1.0, length)) throw StiffnessError("transport oracle step underflow");
    const double sh = dir * h;

    if (!have_first) k[0] = sample(path, path.s0 + dir * s, dim) * f;
    for (int i = 1; i < 7; ++i) {
      Element y = f;
      for (int j = 0; j < i; ++j) {
        if (a[i][j] != 0.0) y += (sh * a[i][j]) * k[j];
      }
      k[i] = sample(path, path.s0 + dir * (s + c[i] * h), dim) * y;
    }
    Element y5 = f;
    Element err = Element::Zero(f.rows(), f.cols());
    for (int j = 0; j < 7; ++j) {
      if (j < 6 && a[6][j] != 0.0) y5 += (sh * a[6][j]) * k[j];
      if (e[j] != 0.0) err += (sh * e[j]) * k[j];
    }
    const double scale = kTol * (1.0 + std::max(f.cwiseAbs().maxCoeff(), y5.cwiseAbs().maxCoeff()));
    const double ratio = err.cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(ratio)) throw StiffnessError("transport oracle diverged");

    if (ratio <= 1.0) {
      s = last ? length : s + h;
      f = std::move(y5);
      k[0] = std::move(k[6]);  // first-same-as-last
      have_first = true;
    }
    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kFieldStep = 1e-5;

void require_in_patch(const PatchConnection& field, const RVector& u) {
  if (field.domain.lower.size() == 0) return;
  if (!field.domain.contains(u)) throw PatchDomainError("Stokes loop leaves the connection patch");
}

std::array<Element, 2> field_at(const PatchConnection& field, const RVector& u) {
  auto a = field.a(u);
  for (const auto& m : a) check_element(m);
  if (a[0].rows() != a[1].rows()) throw DimensionError("connection components differ in size");
  return a;
}

}  // namespace

StokesResult stokes(const PatchConnection& field, const LoopSpec& loop, int steps_per_side) {
  if (!field.a) throw InputError("patch connection has no field");
  if (loop.base.size() != 2 || loop.dir1.size() != 2 || loop.dir2.size() != 2) {
    throw DimensionError("Stokes loops live on a two-parameter patch");
  }
  if (!(loop.eps > 0.0)) throw DomainError("loop side eps must be positive");
  if (steps_per_side < 1) throw DomainError("steps_per_side must be at least 1");
  const double area = loop.dir1(0) * loop.dir2(1) - loop.dir1(1) * loop.dir2(0);
  if (area == 0.0) throw DomainError("loop directions are parallel");

  const RVector c0 = loop.base - 0.5 * loop.eps * (loop.dir1 + loop.dir2);
  // Corners in clockwise order, i.e. the counter-clockwise loop reversed.
  const std::array<RVector, 5> corners = {c0, c0 + loop.eps * loop.dir2,
                                          c0 + loop.eps * (loop.dir1 + loop.dir2),
                                          c0 + loop.eps * loop.dir1, c0};
  for (const auto& p : corners) require_in_patch(field, p);
  for (int k = 0; k < 2; ++k) {
    RVector e = RVector::Zero(2);
    e(k) = kFieldStep;
    require_in_patch(field, loop.base + e);
    require_in_patch(field, loop.base - e);
  }

  // Earlier-left ordering along the loop equals later-left transport of -A
  // along the reversed loop.
  ConnectionPath path;
  path.s0 = 0.0;
  path.s1 = 4.0;
  path.n_steps = 4 * steps_per_side;
  path.a = [&](double s) {
    const int seg = std::min(3, static_cast<int>(std::floor(s)));
    const auto ss = static_cast<std::size_t>(seg);
    const RVector tangent = corners[ss + 1] - corners[ss];
    const RVector u = corners[ss] + (s - seg) * tangent;
    const auto a = field_at(field, u);
    return Element(-(tangent(0) * a[0] + tangent(1) * a[1]));
  };

  StokesResult out;
  out.holonomy = product_integral(path);

  std::array<std::array<Element, 2>, 2> plus, minus;
  for (int k = 0; k < 2; ++k) {
    RVector e = RVector::Zero(2);
    e(k) = kFieldStep;
    plus[static_cast<std::size_t>(k)] = field_at(field, loop.base + e);
    minus[static_cast<std::size_t>(k)] = field_at(field, loop.base - e);
  }
  const auto a = field_at(field, loop.base);
  const Element d1a2 = (plus[0][1] - minus[0][1]) / (2.0 * kFieldStep);
  const Element d2a1 = (plus[1][0] - minus[1][0]) / (2.0 * kFieldStep);
  const Element f12 = d1a2 - d2a1 + commutator(a[0], a[1]);
  out.curvature = area * f12;
  const Element predicted = (loop.eps * loop.eps * out.curvature).exp();
  out.residual = (out.holonomy - predicted).norm();
  return out;
}

double stokes_residual(const PatchConnection& field, const LoopSpec& loop, int steps_per_side) {
  return stokes(field, loop, steps_per_side).residual;
}

// ---------------------------------------------------------------------------

double bianchi_residual(const Chart& chart, const State& phi, const DotConfig& cfg,
                        const RVector& u) {
  const Eigen::Index p = chart.p();
  if (p < 2) throw DimensionError("Bianchi residual needs p >= 2");
  const double h = chart.steps().outer;
  const Tensor3 gamma = christoffel(chart, phi, cfg, u);
  const Tensor4 r = curvature(chart, phi, cfg, u);

  // dr[l](a, b, m, n) = d_l R^a_{bmn}
  std::vector<Tensor4> dr;
  for (Eigen::Index l = 0; l < p; ++l) {
    RVector up = u, dn = u;
    up(l) += h;
    dn(l) -= h;
    const Tensor4 rp = curvature(chart, phi, cfg, up);
    const Tensor4 rm = curvature(chart, phi, cfg, dn);
    Tensor4 d(p);
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = 0; b < p; ++b)
        for (Eigen::Index m = 0; m < p; ++m)
          for (Eigen::Index n = 0; n < p; ++n) d(a, b, m, n) = (rp(a, b, m, n) - rm(a, b, m, n)) / (2.0 * h);
    dr.push_back(std::move(d));
  }

  auto cov = [&](Eigen::Index l, Eigen::Index a, Eigen::Index b, Eigen::Index m, Eigen::Index n) {
    double v = dr[static_cast<std::size_t>(l)](a, b, m, n);
    for (Eigen::Index s = 0; s < p; ++s) {
      v += gamma(a, l, s) * r(s, b, m, n) - gamma(s, l, b) * r(a, s, m, n) -
           gamma(s, l, m) * r(a, b, s, n) - gamma(s, l, n) * r(a, b, m, s);
    }
    return v;
  };

  double worst = 0.0;
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b)
      for (Eigen::Index l = 0; l < p; ++l)
        for (Eigen::Index m = 0; m < p; ++m)
          for (Eigen::Index n = 0; n < p; ++n) {
            const double s = cov(l, a, b, m, n) + cov(m, a, b, n, l) + cov(n, a, b, l, m);
            worst = std::max(worst, std::abs(s));
          }
  return worst;
}

}  // namespace opgeom

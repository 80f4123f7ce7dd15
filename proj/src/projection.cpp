#include "opgeom/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "opgeom/errors.hpp"

namespace opgeom {

namespace {

void check_uniform(const std::vector<Element>& bs, const char* what) {
  if (bs.empty()) throw DimensionError(std::string(what) + ": empty element list");
  for (const auto& b : bs) {
    if (b.rows() != bs.front().rows() || b.cols() != bs.front().cols()) {
      throw DimensionError(std::string(what) + ": elements of mixed dimension");
    }
  }
}

Element combine(const std::vector<Element>& bs, const RVector& c) {
  Element out = Element::Zero(bs.front().rows(), bs.front().cols());
  for (std::size_t i = 0; i < bs.size(); ++i) out += c(static_cast<Eigen::Index>(i)) * bs[i];
  return out;
}

}  // namespace

GramMatrix gram_from_matrix(RMatrix m, double rank_tol) {
  GramMatrix g;
  g.rank_tol = rank_tol;
  const Eigen::Index p = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const bool symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;

  if (symmetric) {
    m = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
    g.eigenvalues = es.eigenvalues();
    const double top = g.eigenvalues(p - 1);
    const double cutoff = rank_tol * top;
    g.is_full_rank = top > 0.0 && g.eigenvalues(0) > cutoff;
    RVector inv = RVector::Zero(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      if (g.eigenvalues(k) > cutoff && top > 0.0) inv(k) = 1.0 / g.eigenvalues(k);
    }
    g.inverse_or_pseudo = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  } else {
    Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double cutoff = rank_tol * s(0);
    g.is_full_rank = s(0) > 0.0 && s(p - 1) > cutoff;
    RVector inv = RVector::Zero(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      if (s(k) > cutoff && s(0) > 0.0) inv(k) = 1.0 / s(k);
    }
    g.inverse_or_pseudo = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  }
  g.det = m.determinant();
  g.m = std::move(m);
  return g;
}

GramMatrix gram(const State& phi, const DotConfig& cfg, const std::vector<Element>& bs,
                double rank_tol) {
  check_uniform(bs, "gram");
  const auto p = static_cast<Eigen::Index>(bs.size());
  RMatrix m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (cfg.symmetric() && j < i) {
        m(i, j) = m(j, i);
        continue;
      }
      m(i, j) = rdot(phi, cfg, bs[static_cast<std::size_t>(i)], bs[static_cast<std::size_t>(j)]);
    }
  }
  return gram_from_matrix(std::move(m), rank_tol);
}

ProjectionResult project(const State& phi, const DotConfig& cfg, const Element& a,
                         const std::vector<Element>& bs, double rank_tol) {
  check_uniform(bs, "project");
  if (a.rows() != bs.front().rows() || a.cols() != bs.front().cols()) {
    throw DimensionError("project: element and reference set differ in dimension");
  }
  const GramMatrix g = gram(phi, cfg, bs, rank_tol);
  const auto p = static_cast<Eigen::Index>(bs.size());
  RVector n(p);
  for (Eigen::Index j = 0; j < p; ++j) n(j) = rdot(phi, cfg, bs[static_cast<std::size_t>(j)], a);

  const RVector c = g.inverse_or_pseudo * n;
  ProjectionResult r;
  r.coefficients = -c;
  r.parallel = combine(bs, c);
  r.perpendicular = a - r.parallel;
  r.norm_sq_parallel = n.dot(c);
  r.residual = rdot(phi, cfg, a, a) - r.norm_sq_parallel;
  r.singular = !g.is_full_rank;
  return r;
}

CauchySchwarz cauchy_schwarz_check(const State& phi, const DotConfig& cfg, const Element& a,
                                   const std::vector<Element>& bs, double rank_tol) {
  const GramMatrix g = gram(phi, cfg, bs, rank_tol);
  if (!g.is_full_rank) throw SingularGramError("reference set is linearly dependent in the state");
  std::vector<Element> extended;
  extended.reserve(bs.size() + 1);
  extended.push_back(a);
  extended.insert(extended.end(), bs.begin(), bs.end());
  const GramMatrix big = gram(phi, cfg, extended, rank_tol);

  CauchySchwarz out;
  out.residual = project(phi, cfg, a, bs, rank_tol).residual;
  out.det_ratio = big.det / g.det;
  return out;
}

Element reflect(const State& phi, const DotConfig& cfg, const Element& a,
                const std::vector<Element>& bs, double rank_tol) {
  return 2.0 * project(phi, cfg, a, bs, rank_tol).parallel - a;
}

GramSchmidtResult gram_schmidt(const State& phi, const DotConfig& cfg,
                               const std::vector<Element>& bs, double rank_tol) {
  check_uniform(bs, "gram_schmidt");
  GramSchmidtResult out;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    // (I - P_i) b_i with P_i the projector onto {b_1..b_{i-1}}, applied
    // through the orthonormal set built so far. The second sweep is the
    // same idempotent projector again and only mops up rounding.
    Element o = bs[i];
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& q : out.orthonormal) o -= rdot(phi, cfg, q, o) * q;
    }
    const double oo = rdot(phi, cfg, o, o);
    const double bb = rdot(phi, cfg, bs[i], bs[i]);
    if (!(oo > rank_tol * bb) || !(oo > 0.0)) {
      throw LinearDependenceError("element " + std::to_string(i + 1) +
                                  " depends linearly on its predecessors");
    }
    out.orthonormal.push_back(o / std::sqrt(oo));
    out.orthogonal.push_back(std::move(o));
  }
  return out;
}

std::vector<Element> complement_basis(const State& phi, const DotConfig& cfg,
                                      const std::vector<Element>& bs,
                                      const std::vector<Element>& full_basis,
                                      double rank_tol) {
  std::vector<Element> q = gram_schmidt(phi, cfg, bs, rank_tol).orthonormal;
  std::vector<Element> out;
  for (const auto& f : full_basis) {
    Element r = f;
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& e : q) r -= rdot(phi, cfg, e, r) * e;
    }
    const double rr = rdot(phi, cfg, r, r);
    const double ff = rdot(phi, cfg, f, f);
    if (rr > rank_tol * ff && rr > 0.0) {
      r /= std::sqrt(rr);
      q.push_back(r);
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Volumes

namespace {

Eigen::Index check_vectors(const std::vector<RVector>& vectors) {
  if (vectors.empty()) throw DimensionError("volume needs at least one vector");
  const Eigen::Index n = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != n) throw DimensionError("volume vectors differ in length");
  }
  if (static_cast<Eigen::Index>(vectors.size()) > n) {
    throw DimensionError("more vectors (" + std::to_string(vectors.size()) +
                         ") than ambient dimension (" + std::to_string(n) + ")");
  }
  return n;
}

}  // namespace

double parallelepiped_volume(const std::vector<RVector>& vectors, bool normalized) {
  check_vectors(vectors);
  std::vector<Element> bs;
  bs.reserve(vectors.size());
  for (const auto& v : vectors) bs.push_back(embed_diag(v));
  const State phi = normalized ? State::normalized_trace() : State::unnormalized_sum();
  return gram(phi, DotConfig{}, bs).det;
}

double parallelepiped_volume_levi_civita(const std::vector<RVector>& vectors, bool normalized) {
  const Eigen::Index n = check_vectors(vectors);
  if (n > 6) throw DomainError("Levi-Civita volume is limited to n <= 6");
  const auto k = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index free_count = n - k;

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::map<long, double> f;  // keyed by the free-index prefix in base n
  do {
    int inversions = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    double term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      term *= vectors[static_cast<std::size_t>(j)](perm[static_cast<std::size_t>(free_count + j)]);
    }
    long key = 0;
    for (Eigen::Index i = 0; i < free_count; ++i) key = key * n + perm[static_cast<std::size_t>(i)];
    f[key] += term;
  } while (std::next_permutation(perm.begin(), perm.end()));

  double sum = 0.0;
  for (const auto& [key, value] : f) sum += value * value;
  double factorial = 1.0;
  for (Eigen::Index i = 2; i <= free_count; ++i) factorial *= static_cast<double>(i);
  double vol = sum / factorial;
  if (normalized) vol /= std::pow(static_cast<double>(n), static_cast<double>(k));
  return vol;
}

bool tetra_membership(double x, double y, double z) {
  for (double c : {x, y, z}) {
    if (!(c >= -1.0 && c <= 1.0)) throw DomainError("tetrahedral membership needs [-1, 1]^3");
  }
  return x * x + y * y + z * z <= 1.0 + 2.0 * x * y * z + 1e-12;
}

PowerDependence power_dependence(const Element& a, int m, double rank_tol) {
  check_element(a);
  if (!is_hermitian(a)) throw HermiticityError("power_dependence needs a hermitian matrix");
  if (m < 1) throw DomainError("power_dependence needs m >= 1");

  const State phi = State::normalized_trace();
  const DotConfig cfg;
  const Element id = Element::Identity(a.rows(), a.cols());
  std::vector<Element> powers;
  Element current = a;
  for (int i = 0; i < m; ++i) {
    powers.push_back(current);
    current = current * a;
  }
  const GramMatrix g = gram(phi, cfg, powers, rank_tol);
  RVector n(m);
  for (int j = 0; j < m; ++j) n(j) = rdot(phi, cfg, powers[static_cast<std::size_t>(j)], id);
  const RVector c = g.inverse_or_pseudo * n;

  PowerDependence out;
  out.alpha = -c;
  out.residual = rdot(phi, cfg, id, id) - n.dot(c);
  out.singular = !g.is_full_rank;
  return out;
}

double tuple_inner(const State& phi, const DotConfig& cfg, const std::vector<Element>& as,
                   const std::vector<Element>& bs) {
  if (as.size() != bs.size()) throw DimensionError("tuple_inner: tuples differ in length");
  check_uniform(as, "tuple_inner");
  check_uniform(bs, "tuple_inner");
  const auto n = static_cast<Eigen::Index>(as.size());
  RMatrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      c(i, j) = rdot(phi, cfg, as[static_cast<std::size_t>(i)], bs[static_cast<std::size_t>(j)]);
  return c.determinant();
}

}  // namespace opgeom

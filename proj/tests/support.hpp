#pragma once

// Random generators and small dense oracles shared by the test binaries.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "opgeom/algebra.hpp"
#include "opgeom/random.hpp"

namespace testing {

using opgeom::Complex;
using opgeom::CVector;
using opgeom::Element;
using opgeom::RMatrix;
using opgeom::RVector;
using opgeom::Xorshift64Star;

inline Complex rand_complex(Xorshift64Star& rng) { return {rng.normal(), rng.normal()}; }

inline Element rand_matrix(Xorshift64Star& rng, Eigen::Index n) {
  Element a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rand_complex(rng);
  return a;
}

inline Element rand_hermitian(Xorshift64Star& rng, Eigen::Index n) {
  const Element a = rand_matrix(rng, n);
  return 0.5 * (a + a.adjoint());
}

inline CVector rand_vector(Xorshift64Star& rng, Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rand_complex(rng);
  return v;
}

/// Full-rank density matrix G G^dag / Tr.
inline Element rand_density(Xorshift64Star& rng, Eigen::Index n) {
  const Element g = rand_matrix(rng, n);
  Element rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline RVector rand_unit3(Xorshift64Star& rng) {
  RVector v(3);
  do {
    for (int i = 0; i < 3; ++i) v(i) = rng.normal();
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

/// Tr(rho a) by an explicit double loop.
inline Complex trace_product(const Element& rho, const Element& a) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.rows(); ++k) s += rho(i, k) * a(k, i);
  return s;
}

/// e^{-beta H} / Z from the general complex eigensolver (distinct levels assumed).
inline Element gibbs_density(const Element& h, double beta) {
  Eigen::ComplexEigenSolver<Element> es(h);
  const Eigen::Index n = h.rows();
  Eigen::VectorXd e = es.eigenvalues().real();
  const double e0 = e.minCoeff();
  const Element v = es.eigenvectors();  // orthogonal for distinct eigenvalues
  Element rho = Element::Zero(n, n);
  double z = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = std::exp(-beta * (e(k) - e0));
    CVector col = v.col(k);
    col /= col.norm();
    rho += w * col * col.adjoint();
    z += w;
  }
  return rho / z;
}

/// Real-valued relative difference |a - b| / max(1, |b|).
inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testing

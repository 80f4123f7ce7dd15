#include "opgeom/algebra.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "opgeom/errors.hpp"

namespace opgeom {

namespace {

std::string shape(const Element& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

double max_abs(const Element& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

void check_element(const Element& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError("algebra element must be a non-empty square matrix, got " + shape(a));
  }
  if (!a.allFinite()) throw DomainError("algebra element has non-finite entries");
}

Element star(const Element& a) { return a.adjoint(); }

bool is_hermitian(const Element& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_antihermitian(const Element& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  return (a + a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Element commutator(const Element& a, const Element& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("commutator of " + shape(a) + " and " + shape(b));
  }
  return a * b - b * a;
}

Element embed_diag(std::span<const double> v) {
  Element out = Element::Zero(static_cast<Eigen::Index>(v.size()),
                              static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out(k, k) = v[i];
  }
  return out;
}

Element embed_diag(const RVector& v) {
  return embed_diag(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

// ---------------------------------------------------------------------------
// State

State State::normalized_trace() { return State(Kind::NormalizedTrace); }

State State::unnormalized_sum() { return State(Kind::UnnormalizedSum); }

State State::vector(CVector psi) {
  if (psi.size() == 0 || !psi.allFinite()) throw DomainError("vector state needs finite entries");
  const double norm = psi.norm();
  if (norm == 0.0) throw DomainError("vector state from the zero vector");
  State s(Kind::Vector);
  s.psi_ = psi / norm;
  return s;
}

State State::density(Element rho) {
  check_element(rho);
  if (!is_hermitian(rho, 1e-12)) throw HermiticityError("density matrix is not hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-12) {
    throw DomainError("density matrix trace differs from 1");
  }
  const Element herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Element> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw DomainError("density matrix has a negative eigenvalue");
  }
  State s(Kind::Density);
  s.rho_ = std::move(rho);
  return s;
}

State State::gibbs(Element hamiltonian, double beta) {
  check_element(hamiltonian);
  if (!is_hermitian(hamiltonian)) throw HermiticityError("Gibbs Hamiltonian is not hermitian");
  if (std::isnan(beta) || beta < 0.0) throw DomainError("Gibbs beta must be >= 0");

  Eigen::SelfAdjointEigenSolver<Element> es(0.5 * (hamiltonian + hamiltonian.adjoint()));
  const RVector& e = es.eigenvalues();
  const double e0 = e.minCoeff();
  RVector w(e.size());
  if (std::isinf(beta)) {
    const double spread = std::max(1.0, e.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < e.size(); ++k) w(k) = (e(k) - e0 <= 1e-10 * spread) ? 1.0 : 0.0;
  } else {
    // Shifting by the ground energy keeps every weight in (0, 1].
    for (Eigen::Index k = 0; k < e.size(); ++k) w(k) = std::exp(-beta * (e(k) - e0));
  }
  w /= w.sum();

  State s(Kind::Gibbs);
  const Element& v = es.eigenvectors();
  s.rho_ = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  s.hamiltonian_ = std::move(hamiltonian);
  s.beta_ = beta;
  return s;
}

Eigen::Index State::dim() const noexcept {
  switch (kind_) {
    case Kind::Vector: return psi_.size();
    case Kind::Density:
    case Kind::Gibbs: return rho_.rows();
    default: return 0;
  }
}

Complex State::operator()(const Element& a) const {
  if (a.rows() != a.cols()) throw DimensionError("state applied to non-square " + shape(a));
  const Eigen::Index n = a.rows();
  if (dim() != 0 && dim() != n) {
    throw DimensionError("state of dimension " + std::to_string(dim()) + " applied to " +
                         shape(a));
  }
  switch (kind_) {
    case Kind::NormalizedTrace: return a.trace() / static_cast<double>(n);
    case Kind::UnnormalizedSum: return a.trace();
    case Kind::Vector: return psi_.dot(a * psi_);
    case Kind::Density:
    case Kind::Gibbs: return rho_.transpose().cwiseProduct(a).sum();
  }
  return {};
}

Element State::density_matrix(Eigen::Index n) const {
  switch (kind_) {
    case Kind::NormalizedTrace:
      return Element::Identity(n, n) / static_cast<double>(n);
    case Kind::UnnormalizedSum: return Element::Identity(n, n);
    case Kind::Vector:
      if (n != dim()) throw DimensionError("vector state dimension mismatch");
      return psi_ * psi_.adjoint();
    default:
      if (n != dim()) throw DimensionError("density dimension mismatch");
      return rho_;
  }
}

Complex state_eval(const State& phi, const Element& a) { return phi(a); }

// ---------------------------------------------------------------------------
// Dot product

Complex dot(const State& phi, const DotConfig& cfg, const Element& a, const Element& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("dot of " + shape(a) + " and " + shape(b));
  }
  const Element ab = a.adjoint() * b;
  const Element ba = b.adjoint() * a;
  return cfg.scale * phi(cfg.lambda * ab + std::conj(cfg.lambda) * ba);
}

double rdot(const State& phi, const DotConfig& cfg, const Element& a, const Element& b) {
  return dot(phi, cfg, a, b).real();
}

Element heisenberg_dot(const PhysConstants& consts, const Element& hamiltonian, const Element& b,
                       const Element& explicit_dt) {
  if (!(consts.hbar > 0.0)) throw DomainError("hbar must be positive");
  if (!is_hermitian(hamiltonian)) throw HermiticityError("Hamiltonian is not hermitian");
  Element out = Complex(0.0, 1.0 / consts.hbar) * commutator(hamiltonian, b);
  if (explicit_dt.size() != 0) {
    if (explicit_dt.rows() != b.rows() || explicit_dt.cols() != b.cols()) {
      throw DimensionError("explicit time derivative has shape " + shape(explicit_dt));
    }
    out += explicit_dt;
  }
  return out;
}

}  // namespace opgeom

#include "opgeom/models.hpp"

#include <cmath>

#include "opgeom/errors.hpp"

namespace opgeom::models {

Element Oscillator::annihilation() const {
  if (dim < 2) throw DomainError("oscillator truncation must be >= 2");
  Element a = Element::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Element Oscillator::creation() const { return annihilation().adjoint(); }

Element Oscillator::position() const {
  const Element a = annihilation();
  return std::sqrt(hbar / (2.0 * mass * omega)) * (a + a.adjoint());
}

Element Oscillator::momentum() const {
  const Element a = annihilation();
  return Complex(0.0, std::sqrt(hbar * mass * omega / 2.0)) * (a.adjoint() - a);
}

Element Oscillator::hamiltonian() const {
  Element h = Element::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) h(n, n) = hbar * omega * (static_cast<double>(n) + 0.5);
  return h;
}

Element Oscillator::hamiltonian_from_xp() const {
  const Element x = position();
  const Element p = momentum();
  return 0.5 * (p * p / mass + mass * omega * omega * x * x);
}

CVector Oscillator::fock(Eigen::Index n) const {
  if (n < 0 || n >= dim) throw DomainError("Fock level outside truncation");
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return v;
}

CVector Oscillator::coherent_state(Complex alpha) const {
  CVector v(dim);
  Complex term = std::exp(-0.5 * std::norm(alpha));
  v(0) = term;
  for (Eigen::Index n = 1; n < dim; ++n) {
    term *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = term;
  }
  return v / v.norm();
}

Element pauli_x() {
  Element m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Element pauli_y() {
  Element m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Element pauli_z() {
  Element m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Element kron(const Element& a, const Element& b) {
  Element out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace opgeom::models

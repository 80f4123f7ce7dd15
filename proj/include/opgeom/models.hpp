#pragma once

// Concrete operators used throughout the examples and tests: truncated
// harmonic-oscillator matrices in the Fock basis and the Pauli matrices.

#include "opgeom/algebra.hpp"

namespace opgeom::models {

struct Oscillator {
  Eigen::Index dim = 64;  // Fock-space truncation
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;

  /// a|n> = sqrt(n)|n-1>.
  Element annihilation() const;
  Element creation() const;
  /// x = sqrt(hbar / 2 m omega) (a + a^dag).
  Element position() const;
  /// p = i sqrt(hbar m omega / 2) (a^dag - a).
  Element momentum() const;
  /// hbar omega (N + 1/2); diagonal, so exact in the truncated basis.
  Element hamiltonian() const;
  /// (p^2 / m + m omega^2 x^2) / 2 built from the truncated x and p; differs
  /// from hamiltonian() only in the top Fock level.
  Element hamiltonian_from_xp() const;

  CVector fock(Eigen::Index n) const;
  CVector ground_state() const { return fock(0); }
  /// Truncated coherent state e^{-|alpha|^2/2} sum alpha^n / sqrt(n!) |n>,
  /// renormalized after truncation.
  CVector coherent_state(Complex alpha) const;
};

Element pauli_x();
Element pauli_y();
Element pauli_z();

/// Kronecker product a (x) b.
Element kron(const Element& a, const Element& b);
CVector kron(const CVector& a, const CVector& b);

}  // namespace opgeom::models

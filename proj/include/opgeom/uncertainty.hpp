#pragma once

// Bounds for simultaneous measurements built on the projection machinery.

#include <vector>

#include "opgeom/algebra.hpp"

namespace opgeom {

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  bool satisfied = true;
  bool singular = false;  // Gram pseudo-inverse was used
};

BoundReport make_report(double lhs, double rhs, bool singular = false);

/// delta A = A - phi(A) 1.
Element fluctuation(const State& phi, const Element& a);

/// phi(delta A^* delta A).
double variance(const State& phi, const Element& a);

/// lhs = delta A . delta A, rhs = squared projection of delta A onto
/// Span{delta B_i}. With the default DotConfig lhs is variance(A).
BoundReport fluctuation_bound(const State& phi, const DotConfig& cfg, const Element& a,
                              const std::vector<Element>& bs);

struct PairBound {
  BoundReport report;      // lhs = phi(A^2) phi(B^2), rhs = |phi([A,B])|^2 / 4
  double commutator_abs;   // measured |phi([A,B])|
  double commutator_scale; // caller's expected value (hbar, theta, ...)
};

/// Second-moment commutator bound for two hermitian operators.
PairBound pair_product_bound(const State& phi, const Element& a, const Element& b,
                             double commutator_scale);

struct EnergyBound {
  BoundReport raw;    // phi(H^2) >= (hbar^2/4) <B'> M^{-1} <B'>
  BoundReport fluct;  // Delta H^2 >= (hbar^2/4) <B'> m^{-1} <B'>
  RVector rates;      // <B'_i>, after antihermitian B_i are rotated to hermitian
};

/// Energy bound for observables B_i (each hermitian or antihermitian).
/// B'_i comes from heisenberg_dot with the optional explicit derivatives
/// (empty vector means none). Expectations use scale * phi, so both sides
/// scale together with DotConfig::scale; lambda must be the symmetric 1/2.
EnergyBound energy_bound(const PhysConstants& consts, const State& phi, const DotConfig& cfg,
                         const Element& hamiltonian, const std::vector<Element>& bs,
                         const std::vector<Element>& explicit_dts = {});

}  // namespace opgeom

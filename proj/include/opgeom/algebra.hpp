#pragma once

// Finite-dimensional matrix algebra: elements, the star operation, states
// (positive linear functionals) and the state-induced dot product.

#include <complex>
#include <span>
#include <variant>

#include <Eigen/Dense>

namespace opgeom {

using Complex = std::complex<double>;

/// Element of the algebra: a dense complex square matrix.
using Element = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermiticityTol = 1e-10;

/// Throws DomainError unless `a` is square with finite entries.
void check_element(const Element& a);

/// Conjugate transpose.
Element star(const Element& a);

/// |a - a^*| <= tol * max|a_ij|, elementwise.
bool is_hermitian(const Element& a, double tol = kHermiticityTol);
bool is_antihermitian(const Element& a, double tol = kHermiticityTol);

/// Commutator ab - ba.
Element commutator(const Element& a, const Element& b);

/// Diagonal matrix diag(v).
Element embed_diag(std::span<const double> v);
Element embed_diag(const RVector& v);

/// A state, i.e. a positive linear functional on the algebra.
///
/// Trace and sum states are dimension-agnostic: they act on any square
/// element (n is read from the argument). The vector, density and Gibbs
/// variants are bound to the dimension of their data.
class State {
 public:
  enum class Kind { NormalizedTrace, UnnormalizedSum, Vector, Density, Gibbs };

  /// phi(a) = Tr(a) / n.
  static State normalized_trace();
  /// phi(a) = Tr(a); n times the normalized trace.
  static State unnormalized_sum();
  /// phi(a) = <psi|a|psi>. `psi` is normalized here; a zero vector is a
  /// DomainError.
  static State vector(CVector psi);
  /// phi(a) = Tr(rho a). rho must be hermitian, trace one and positive
  /// semidefinite (eigenvalues >= -1e-12); checked exactly.
  static State density(Element rho);
  /// phi(a) = Tr(a e^{-beta H}) / Tr e^{-beta H}, evaluated through the
  /// eigendecomposition of H. beta may be +infinity (ground-state
  /// projector, degenerate levels weighted equally).
  static State gibbs(Element hamiltonian, double beta);

  Kind kind() const noexcept { return kind_; }
  /// Bound dimension, or 0 for the dimension-agnostic trace/sum states.
  Eigen::Index dim() const noexcept;
  bool normalized() const noexcept { return kind_ != Kind::UnnormalizedSum; }

  /// phi(a). Throws DimensionError on mismatch.
  Complex operator()(const Element& a) const;

  /// Density matrix representing the state in dimension n (for trace and
  /// sum states n must be supplied; otherwise it must match dim()).
  Element density_matrix(Eigen::Index n) const;

  const CVector& psi() const noexcept { return psi_; }
  const Element& hamiltonian() const noexcept { return hamiltonian_; }
  double beta() const noexcept { return beta_; }

 private:
  explicit State(Kind k) : kind_(k) {}

  Kind kind_;
  CVector psi_;
  Element rho_;  // density, or the Gibbs weight matrix
  Element hamiltonian_;
  double beta_ = 0.0;
};

/// phi(a); free-function spelling of State::operator().
Complex state_eval(const State& phi, const Element& a);

/// Parameters of the generalized dot product
/// a ._lambda b = scale * phi(lambda a^* b + conj(lambda) b^* a).
/// lambda = 1/2 is the symmetric product used everywhere by default.
struct DotConfig {
  Complex lambda{0.5, 0.0};
  double scale = 1.0;

  bool symmetric() const noexcept { return lambda == Complex{0.5, 0.0}; }
};

Complex dot(const State& phi, const DotConfig& cfg, const Element& a, const Element& b);

/// Real part of dot(); the value the Gram and geometry code consumes.
double rdot(const State& phi, const DotConfig& cfg, const Element& a, const Element& b);

struct PhysConstants {
  double hbar = 1.0;
  double c = 1.0;
};

/// Heisenberg time derivative  B' = dB/dt|explicit + (i/hbar)[H, B].
/// Pass an empty matrix for `explicit_dt` when B has no explicit time
/// dependence. Throws HermiticityError if H is not hermitian.
Element heisenberg_dot(const PhysConstants& consts, const Element& hamiltonian, const Element& b,
                       const Element& explicit_dt = Element{});

}  // namespace opgeom

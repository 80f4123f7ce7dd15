#pragma once

// Gram-matrix projection geometry over a state-induced dot product:
// Cauchy-Schwarz residuals, projection onto spans, reflection,
// Gram-Schmidt, Gram-determinant volumes and power dependence.

#include <vector>

#include "opgeom/algebra.hpp"

namespace opgeom {

inline constexpr double kRankTol = 1e-10;

struct GramMatrix {
  RMatrix m;                  // M_ij = Re(b_i . b_j)
  double det = 0.0;
  double rank_tol = kRankTol;  // relative to the largest eigenvalue
  RMatrix inverse_or_pseudo;
  bool is_full_rank = false;
  RVector eigenvalues;        // ascending; empty for non-symmetric M
};

/// Builds the Gram matrix of `bs` and attaches det and (pseudo-)inverse.
/// Full rank means smallest eigenvalue > rank_tol * largest. Below that
/// the eigenvalue-thresholded pseudo-inverse is used instead.
GramMatrix gram(const State& phi, const DotConfig& cfg, const std::vector<Element>& bs,
                double rank_tol = kRankTol);

/// Gram matrix from already-computed entries.
GramMatrix gram_from_matrix(RMatrix m, double rank_tol = kRankTol);

struct ProjectionResult {
  RVector coefficients;  // lambda'_i = -M^{-1}_ij N_j
  Element parallel;      // a_par = b_i M^{-1}_ij N_j
  Element perpendicular; // a - a_par
  double norm_sq_parallel = 0.0;  // N_i M^{-1}_ij N_j
  double residual = 0.0;          // f(lambda') = a.a - N M^{-1} N
  bool singular = false;          // pseudo-inverse path was taken
};

ProjectionResult project(const State& phi, const DotConfig& cfg, const Element& a,
                         const std::vector<Element>& bs, double rank_tol = kRankTol);

struct CauchySchwarz {
  double residual = 0.0;   // f(lambda')
  double det_ratio = 0.0;  // det(M_IJ) / det(M_ij) with B_I = (a, bs)
};

/// Throws SingularGramError when the Gram matrix of `bs` is not full rank.
CauchySchwarz cauchy_schwarz_check(const State& phi, const DotConfig& cfg, const Element& a,
                                   const std::vector<Element>& bs, double rank_tol = kRankTol);

/// Mirror image 2 a_par - a about Span{bs}.
Element reflect(const State& phi, const DotConfig& cfg, const Element& a,
                const std::vector<Element>& bs, double rank_tol = kRankTol);

struct GramSchmidtResult {
  std::vector<Element> orthogonal;   // o_i = (I - P_i) b_i
  std::vector<Element> orthonormal;  // o_i / sqrt(o_i . o_i)
};

/// Throws LinearDependenceError when some o_i . o_i <= rank_tol * b_i . b_i.
GramSchmidtResult gram_schmidt(const State& phi, const DotConfig& cfg,
                               const std::vector<Element>& bs, double rank_tol = kRankTol);

/// Orthonormal basis of the part of Span{full_basis} orthogonal to
/// Span{bs}: each full-basis element is projected off bs and the
/// survivors are orthonormalized; dependent leftovers are dropped.
std::vector<Element> complement_basis(const State& phi, const DotConfig& cfg,
                                      const std::vector<Element>& bs,
                                      const std::vector<Element>& full_basis,
                                      double rank_tol = kRankTol);

/// Gram determinant of the diag-embedded vectors under the normalized
/// trace (normalized = true, giving a factor 1/n^{k}) or the plain sum.
/// Throws DimensionError when more vectors than the ambient dimension.
double parallelepiped_volume(const std::vector<RVector>& vectors, bool normalized);

/// Same quantity through the Levi-Civita contraction
/// sum_alpha f_alpha f_alpha with f = eps . (v_0 ... v_p) / sqrt((n-p-1)!).
/// Enumerates all n! permutations, so n is limited to 6.
double parallelepiped_volume_levi_civita(const std::vector<RVector>& vectors, bool normalized);

/// True iff x^2 + y^2 + z^2 <= 1 + 2xyz (+1e-12). Arguments must lie in
/// [-1, 1] (DomainError otherwise).
bool tetra_membership(double x, double y, double z);

struct PowerDependence {
  RVector alpha;  // I + sum_i alpha_i A^i ~ 0, i = 1..m
  double residual = 0.0;
  bool singular = false;
};

/// Least-squares linear dependence of the identity on {A, A^2, ..., A^m}
/// in the normalized trace dot product.
PowerDependence power_dependence(const Element& a, int m, double rank_tol = kRankTol);

/// det(a_i . b_j) for equal-length tuples.
double tuple_inner(const State& phi, const DotConfig& cfg, const std::vector<Element>& as,
                   const std::vector<Element>& bs);

}  // namespace opgeom

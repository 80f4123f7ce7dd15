#include "opgeom/uncertainty.hpp"

#include <cmath>
#include <string>

#include "opgeom/errors.hpp"
#include "opgeom/projection.hpp"

namespace opgeom {

namespace {

constexpr double kBoundTol = 1e-10;

Element identity_like(const Element& a) { return Element::Identity(a.rows(), a.cols()); }

}  // namespace

BoundReport make_report(double lhs, double rhs, bool singular) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.satisfied = r.margin >= -kBoundTol;
  r.singular = singular;
  return r;
}

Element fluctuation(const State& phi, const Element& a) {
  check_element(a);
  return a - phi(a) * identity_like(a);
}

double variance(const State& phi, const Element& a) {
  const Element d = fluctuation(phi, a);
  return phi(d.adjoint() * d).real();
}

BoundReport fluctuation_bound(const State& phi, const DotConfig& cfg, const Element& a,
                              const std::vector<Element>& bs) {
  std::vector<Element> deltas;
  deltas.reserve(bs.size());
  for (const auto& b : bs) deltas.push_back(fluctuation(phi, b));
  const Element da = fluctuation(phi, a);
  const ProjectionResult pr = project(phi, cfg, da, deltas);
  return make_report(rdot(phi, cfg, da, da), pr.norm_sq_parallel, pr.singular);
}

PairBound pair_product_bound(const State& phi, const Element& a, const Element& b,
                             double commutator_scale) {
  if (!is_hermitian(a) || !is_hermitian(b)) {
    throw HermiticityError("pair_product_bound needs hermitian operators");
  }
  const double lhs = phi(a * a).real() * phi(b * b).real();
  const double comm = std::abs(phi(commutator(a, b)));
  PairBound out{make_report(lhs, 0.25 * comm * comm), comm, commutator_scale};
  return out;
}

EnergyBound energy_bound(const PhysConstants& consts, const State& phi, const DotConfig& cfg,
                         const Element& hamiltonian, const std::vector<Element>& bs,
                         const std::vector<Element>& explicit_dts) {
  if (!cfg.symmetric()) throw DomainError("energy_bound needs the symmetric dot product");
  if (!is_hermitian(hamiltonian)) throw HermiticityError("Hamiltonian is not hermitian");
  if (bs.empty()) throw DimensionError("energy_bound needs at least one observable");
  if (!explicit_dts.empty() && explicit_dts.size() != bs.size()) {
    throw DimensionError("explicit derivative list does not match observables");
  }

  // An antihermitian B enters as the hermitian -iB.
  std::vector<Element> herm;
  std::vector<Element> rates_ops;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    Complex rot = 1.0;
    if (is_hermitian(bs[i])) {
      rot = 1.0;
    } else if (is_antihermitian(bs[i])) {
      rot = Complex(0.0, -1.0);
    } else {
      throw HermiticityError("observable " + std::to_string(i) +
                             " is neither hermitian nor antihermitian");
    }
    const Element dt = explicit_dts.empty() ? Element{} : Element(explicit_dts[i]);
    herm.push_back(rot * bs[i]);
    rates_ops.push_back(rot * heisenberg_dot(consts, hamiltonian, bs[i], dt));
  }

  const auto p = static_cast<Eigen::Index>(bs.size());
  RVector rates(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    rates(i) = cfg.scale * phi(rates_ops[static_cast<std::size_t>(i)]).real();
  }
  const double pref = 0.25 * consts.hbar * consts.hbar;

  const GramMatrix m = gram(phi, cfg, herm);
  const double raw_rhs = pref * rates.dot(m.inverse_or_pseudo * rates);
  const double raw_lhs = rdot(phi, cfg, hamiltonian, hamiltonian);

  std::vector<Element> deltas;
  for (const auto& b : herm) deltas.push_back(fluctuation(phi, b));
  const GramMatrix mf = gram(phi, cfg, deltas);
  const double fl_rhs = pref * rates.dot(mf.inverse_or_pseudo * rates);
  const Element dh = fluctuation(phi, hamiltonian);
  const double fl_lhs = rdot(phi, cfg, dh, dh);

  EnergyBound out;
  out.raw = make_report(raw_lhs, raw_rhs, !m.is_full_rank);
  out.fluct = make_report(fl_lhs, fl_rhs, !mf.is_full_rank);
  out.rates = rates;
  return out;
}

}  // namespace opgeom

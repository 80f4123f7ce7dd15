#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opgeom/errors.hpp"
#include "opgeom/models.hpp"
#include "opgeom/uncertainty.hpp"
#include "support.hpp"

using namespace opgeom;
using testing::rand_density;
using testing::rand_hermitian;
using testing::rand_matrix;

namespace {

const DotConfig kCfg;
const PhysConstants kUnits;

State vector_state(std::initializer_list<Complex> v) {
  CVector psi(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) psi(i++) = x;
  return State::vector(psi);
}

}  // namespace

TEST_CASE("fluctuation and variance examples") {
  const Element z = models::pauli_z(), x = models::pauli_x();
  const State up = vector_state({1.0, 0.0});
  CHECK(fluctuation(State::normalized_trace(), Element::Identity(3, 3)).isZero(1e-15));
  CHECK((fluctuation(up, z) - (z - Element::Identity(2, 2))).norm() < 1e-15);
  CHECK(variance(up, Element::Identity(2, 2)) == doctest::Approx(0.0));
  CHECK(variance(up, x) == doctest::Approx(1.0));

  const models::Oscillator osc;
  const State ground = State::vector(osc.ground_state());
  CHECK(std::abs(variance(ground, osc.position()) - 0.5) < 1e-10);

  Xorshift64Star rng(1);
  for (int t = 0; t < 100; ++t) {
    const State rho = State::density(rand_density(rng, 3));
    const Element a = rand_matrix(rng, 3);
    CHECK(std::abs(rho(fluctuation(rho, a))) < 1e-12);
    CHECK(variance(rho, a) >= -1e-12);
  }
  CHECK_THROWS_AS(variance(up, Element::Identity(3, 3)), DimensionError);
}

TEST_CASE("fluctuation_bound examples") {
  const State mixed = State::normalized_trace();
  const BoundReport r = fluctuation_bound(mixed, kCfg, models::pauli_z(), {models::pauli_x()});
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(std::abs(r.rhs) < 1e-15);
  CHECK(r.satisfied);

  Xorshift64Star rng(2);
  const State rho = State::density(rand_density(rng, 4));
  const Element b1 = rand_hermitian(rng, 4), b2 = rand_hermitian(rng, 4);
  const Element a = 2.0 * Element::Identity(4, 4) + 0.7 * b1 - 1.3 * b2;
  const BoundReport eq = fluctuation_bound(rho, kCfg, a, {b1, b2});
  CHECK(std::abs(eq.margin) < 1e-9);
}

TEST_CASE("fluctuation_bound sweep and single-observable textbook form") {
  Xorshift64Star rng(3);
  for (int t = 0; t < 500; ++t) {
    const State rho = State::density(rand_density(rng, 4));
    std::vector<Element> bs;
    const int p = 1 + static_cast<int>(rng.next() % 3);
    for (int i = 0; i < p; ++i) bs.push_back(rand_hermitian(rng, 4));
    const Element a = rand_hermitian(rng, 4);
    const BoundReport r = fluctuation_bound(rho, kCfg, a, bs);
    CHECK(r.satisfied);
    CHECK(r.lhs == doctest::Approx(variance(rho, a)).epsilon(1e-12));

    if (p == 1) {
      const Element da = fluctuation(rho, a), db = fluctuation(rho, bs[0]);
      const double anti = 0.5 * rho(da * db + db * da).real();
      const double vb = variance(rho, bs[0]);
      CHECK(std::abs(r.rhs * vb - anti * anti) < 1e-10 * (1 + anti * anti));
    }

    // rescaling the observables leaves the bound unchanged
    std::vector<Element> scaled;
    for (const auto& b : bs) scaled.push_back(-3.5 * b);
    CHECK(std::abs(fluctuation_bound(rho, kCfg, a, scaled).rhs - r.rhs) < 1e-10);
  }
}

TEST_CASE("pair_product_bound: oscillator saturation") {
  const models::Oscillator osc;
  const State ground = State::vector(osc.ground_state());
  const PairBound pb = pair_product_bound(ground, osc.position(), osc.momentum(), osc.hbar);
  CHECK(std::abs(pb.report.lhs - 0.25) < 1e-8);
  CHECK(std::abs(pb.report.rhs - 0.25) < 1e-8);
  CHECK(std::abs(pb.report.margin) < 1e-8);
  CHECK(std::abs(pb.commutator_abs - 1.0) < 1e-12);
  CHECK(pb.commutator_scale == 1.0);
}

TEST_CASE("pair_product_bound: commuting and Moyal pairs") {
  Element a = Element::Zero(3, 3), b = Element::Zero(3, 3);
  a.diagonal() << 1.0, -2.0, 0.5;
  b.diagonal() << 0.3, 0.3, 4.0;
  Xorshift64Star rng(4);
  const State rho = State::density(rand_density(rng, 3));
  CHECK(pair_product_bound(rho, a, b, 0.0).report.rhs == 0.0);

  const double theta = 0.3;
  const models::Oscillator osc;
  const State ground = State::vector(osc.ground_state());
  const PairBound moyal =
      pair_product_bound(ground, std::sqrt(theta) * osc.position(), std::sqrt(theta) * osc.momentum(), theta);
  CHECK(std::abs(moyal.report.lhs - theta * theta / 4) < 1e-8);
  CHECK(std::abs(moyal.report.rhs - theta * theta / 4) < 1e-8);
  CHECK(std::abs(moyal.commutator_abs - theta) < 1e-12);

  CHECK_THROWS_AS(pair_product_bound(ground, rand_matrix(rng, 64), osc.momentum(), 1.0), HermiticityError);
}

TEST_CASE("pair_product_bound: cross directions of two modes") {
  const models::Oscillator osc{16};
  const Element id = Element::Identity(16, 16);
  const Element x1 = models::kron(osc.position(), id);
  const Element p2 = models::kron(id, osc.momentum());
  const State ground = State::vector(models::kron(osc.ground_state(), osc.ground_state()));
  const PairBound pb = pair_product_bound(ground, x1, p2, 0.0);
  CHECK(pb.report.rhs < 1e-10);
  CHECK(std::abs(pb.report.lhs - 0.25) < 1e-10);
}

TEST_CASE("energy_bound: conserved observables give zero") {
  Xorshift64Star rng(5);
  Element h = Element::Zero(4, 4);
  h.diagonal() << 0.0, 1.0, 2.5, 3.0;
  Element b = Element::Zero(4, 4);
  b.diagonal() << 1.0, -1.0, 2.0, 0.5;
  const State rho = State::density(rand_density(rng, 4));
  const EnergyBound eb = energy_bound(kUnits, rho, kCfg, h, {b, h});
  CHECK(std::abs(eb.raw.rhs) < 1e-14);
  CHECK(std::abs(eb.fluct.rhs) < 1e-14);
}

TEST_CASE("energy_bound: coherent state closed form") {
  const models::Oscillator osc;
  const Element h = osc.hamiltonian();
  const Element x = osc.position(), p = osc.momentum();

  // alpha = 1: <x> = sqrt 2, <p> = 0, <x^2> = 5/2, <p^2> = 1/2, <N> = 1, <N^2> = 2
  const State coh = State::vector(osc.coherent_state(1.0));
  const EnergyBound eb = energy_bound(kUnits, coh, kCfg, h, {x, p});
  CHECK(std::abs(eb.rates(0)) < 1e-12);
  CHECK(std::abs(eb.rates(1) + std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(eb.raw.lhs - 3.25) < 1e-10);
  CHECK(std::abs(eb.raw.rhs - 1.0) < 1e-10);
  CHECK(std::abs(eb.fluct.lhs - 1.0) < 1e-10);
  CHECK(std::abs(eb.fluct.rhs - 1.0) < 1e-10);
  CHECK(eb.raw.satisfied);
  CHECK(eb.fluct.satisfied);

  // position alone: <x'> = <p> = 0 for real alpha
  const EnergyBound only_x = energy_bound(kUnits, coh, kCfg, h, {x});
  CHECK(std::abs(only_x.raw.rhs) < 1e-12);

  // complex alpha = 1 + i/2: <p> = sqrt 2 Im alpha, <x^2> = 2 (Re alpha)^2 + 1/2
  const Complex alpha(1.0, 0.5);
  const State coh2 = State::vector(osc.coherent_state(alpha));
  const EnergyBound with_p = energy_bound(kUnits, coh2, kCfg, h, {x});
  const double mean_p = std::sqrt(2.0) * alpha.imag();
  const double x2 = 2.0 * alpha.real() * alpha.real() + 0.5;
  CHECK(std::abs(with_p.raw.rhs - 0.25 * mean_p * mean_p / x2) < 1e-10);
  CHECK(std::abs(with_p.fluct.rhs - 0.25 * mean_p * mean_p / 0.5) < 1e-10);
  CHECK(with_p.raw.rhs > 1e-3);
  CHECK(with_p.raw.satisfied);
  CHECK(with_p.fluct.satisfied);
}

TEST_CASE("energy_bound sweep") {
  Xorshift64Star rng(6);
  for (int t = 0; t < 200; ++t) {
    const State rho = State::density(rand_density(rng, 4));
    const Element h = rand_hermitian(rng, 4);
    std::vector<Element> bs;
    const int p = 1 + static_cast<int>(rng.next() % 3);
    for (int i = 0; i < p; ++i) {
      Element b = rand_hermitian(rng, 4);
      if (rng.uniform() < 0.3) b *= Complex(0.0, 1.0);
      bs.push_back(b);
    }
    const EnergyBound eb = energy_bound(kUnits, rho, kCfg, h, bs);
    CHECK(eb.raw.satisfied);
    CHECK(eb.fluct.satisfied);
    CHECK(eb.raw.lhs == doctest::Approx(rho(h * h).real()).epsilon(1e-12));
    CHECK(eb.fluct.lhs == doctest::Approx(variance(rho, h)).epsilon(1e-12));
  }
}

TEST_CASE("energy_bound with explicit time dependence") {
  Xorshift64Star rng(8);
  const State rho = State::density(rand_density(rng, 3));
  const Element h = rand_hermitian(rng, 3), b = rand_hermitian(rng, 3), dt = rand_hermitian(rng, 3);
  const EnergyBound eb = energy_bound(kUnits, rho, kCfg, h, {b}, {dt});
  CHECK(std::abs(eb.rates(0) - rho(heisenberg_dot(kUnits, h, b, dt)).real()) < 1e-12);
  CHECK_THROWS_AS(energy_bound(kUnits, rho, kCfg, h, {b}, {dt, dt}), DimensionError);
}

TEST_CASE("energy_bound errors") {
  Xorshift64Star rng(7);
  const State tr = State::normalized_trace();
  const Element h = rand_hermitian(rng, 3);
  CHECK_THROWS_AS(energy_bound(kUnits, tr, kCfg, rand_matrix(rng, 3), {h}), HermiticityError);
  CHECK_THROWS_AS(energy_bound(kUnits, tr, kCfg, h, {rand_matrix(rng, 3)}), HermiticityError);
  DotConfig deformed;
  deformed.lambda = Complex(0.3, 0.1);
  CHECK_THROWS_AS(energy_bound(kUnits, tr, deformed, h, {h}), DomainError);
}

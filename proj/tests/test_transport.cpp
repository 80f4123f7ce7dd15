#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "opgeom/errors.hpp"
#include "opgeom/hypersurface.hpp"
#include "opgeom/transport.hpp"
#include "support.hpp"

using namespace opgeom;

namespace {

ConnectionPath constant_path(const Element& c, double s0, double s1, int n) {
  return {[c](double) { return c; }, s0, s1, n};
}

double rel_err(const Element& a, const Element& b) { return (a - b).norm() / b.norm(); }

Element antihermitian(Xorshift64Star& rng, Eigen::Index n) {
  return Complex(0, 1) * testing::rand_hermitian(rng, n);
}

}  // namespace

TEST_CASE("zero connection transports to identity") {
  const ConnectionPath zero = constant_path(Element::Zero(3, 3), 0.0, 2.0, 50);
  const Element id = Element::Identity(3, 3);
  CHECK(ordered_series(zero, 6) == id);
  CHECK(product_integral(zero) == id);
  CHECK((transport_oracle(zero) - id).norm() == 0.0);
}

TEST_CASE("constant connection collapses ordering") {
  Xorshift64Star rng(1);
  for (int t = 0; t < 10; ++t) {
    Element c = testing::rand_matrix(rng, 3);
    c /= c.norm();
    const Element exact = (0.5 * c).exp();
    for (int n : {1, 7, 1000}) CHECK((product_integral(constant_path(c, 0.0, 0.5, n)) - exact).norm() < 1e-10);
    CHECK((transport_oracle(constant_path(c, 0.0, 0.5, 1)) - exact).norm() < 1e-11);
    CHECK((ordered_series(constant_path(c, 0.0, 0.5, 1000), 6) - exact).norm() < 1e-4);
  }
}

TEST_CASE("series truncation improves with order") {
  Xorshift64Star rng(2);
  Element c = testing::rand_matrix(rng, 2);
  c /= c.norm();
  const ConnectionPath path = constant_path(c, 0.0, 0.5, 1000);
  const Element exact = (0.5 * c).exp();
  double last = 1.0;
  for (int k = 0; k <= kMaxSeriesOrder; ++k) {
    const double e = (ordered_series(path, k) - exact).norm();
    CHECK(e < last);
    last = e;
  }
  CHECK_THROWS_AS(ordered_series(path, 7), OrderTooLargeError);
  CHECK_THROWS_AS(ordered_series(path, -1), DomainError);
}

TEST_CASE("stored non-commuting path against the oracle") {
  const Element x = fixtures::stored_x(), y = fixtures::stored_y();
  CHECK(((x * y - y * x).norm()) > 0.5);
  const Element oracle = transport_oracle(fixtures::stored_path(1));
  CHECK(rel_err(product_integral(fixtures::stored_path(10000)), oracle) < 1e-6);
  CHECK(rel_err(ordered_series(fixtures::stored_path(2000), 6), oracle) < 1e-3);

  // first-order convergence in the step count
  const double e1 = rel_err(product_integral(fixtures::stored_path(100)), oracle);
  const double e2 = rel_err(product_integral(fixtures::stored_path(200)), oracle);
  CHECK(e1 / e2 > 1.9);
}

TEST_CASE("oracle is linear in the initial condition") {
  Xorshift64Star rng(3);
  const ConnectionPath path = fixtures::stored_path(1);
  const Element f = transport_oracle(path);
  for (int t = 0; t < 5; ++t) {
    const Element f0 = testing::rand_matrix(rng, 2);
    CHECK((transport_oracle(path, f0) - f * f0).norm() < 1e-10 * (1 + f0.norm()));
  }
}

TEST_CASE("composition and reversal") {
  const Element x = fixtures::stored_x(), y = fixtures::stored_y();
  auto a = [x, y](double s) { return Element(s * x + y); };
  const ConnectionPath whole{a, 0.0, 1.0, 1000}, first{a, 0.0, 0.4, 400}, second{a, 0.4, 1.0, 600};
  CHECK((product_integral(second) * product_integral(first) - product_integral(whole)).norm() < 1e-9);
  CHECK((transport_oracle(second) * transport_oracle(first) - transport_oracle(whole)).norm() < 1e-9);

  const ConnectionPath back{a, 1.0, 0.0, 1000};
  const Element id = Element::Identity(2, 2);
  CHECK((product_integral(back) * product_integral(whole) - id).norm() < 1e-8);
  CHECK((transport_oracle(back) * transport_oracle(whole) - id).norm() < 1e-8);
}

TEST_CASE("antihermitian connections give unitary transport") {
  Xorshift64Star rng(4);
  for (int t = 0; t < 5; ++t) {
    const Element p = antihermitian(rng, 3), q = antihermitian(rng, 3);
    const ConnectionPath path{[p, q](double s) { return Element(std::cos(s) * p + s * s * q); }, 0.0, 2.0, 500};
    const Element f = product_integral(path);
    CHECK((f.adjoint() * f - Element::Identity(3, 3)).norm() < 1e-8 * path.n_steps);
    const Element o = transport_oracle(path);
    CHECK((o.adjoint() * o - Element::Identity(3, 3)).norm() < 1e-8);
  }
}

TEST_CASE("transport errors") {
  const ConnectionPath stiff = constant_path(-1e15 * Element::Identity(2, 2), 0.0, 1.0, 1);
  CHECK_THROWS_AS(transport_oracle(stiff), StiffnessError);
  CHECK_THROWS_AS(product_integral(constant_path(Element::Zero(2, 3), 0.0, 1.0, 1)), DimensionError);
  CHECK_THROWS_AS(product_integral(constant_path(Element::Zero(2, 2), 0.0, 1.0, 0)), DomainError);
  CHECK_THROWS_AS(transport_oracle(fixtures::stored_path(1), Element::Identity(3, 3)), DimensionError);
}

TEST_CASE("Stokes: abelian closed form and zero field") {
  const double c = 0.7;
  const PatchConnection abelian{[c](const RVector& u) {
                                  return std::array<Element, 2>{Element::Constant(1, 1, -c * u(1)),
                                                                Element::Constant(1, 1, c * u(0))};
                                },
                                {}};
  for (double eps : {0.1, 0.05}) {
    const StokesResult r = stokes(abelian, {RVector{{0.3, -0.2}}, RVector{{1.0, 0.0}}, RVector{{0.0, 1.0}}, eps});
    CHECK(std::abs(r.curvature(0, 0) - 2 * c) < 1e-9);
    CHECK(std::abs(r.holonomy(0, 0) - std::exp(2 * c * eps * eps)) < 1e-12);
    CHECK(r.residual < 1e-9);
  }

  const PatchConnection zero{[](const RVector&) {
                               return std::array<Element, 2>{Element::Zero(2, 2), Element::Zero(2, 2)};
                             },
                             {}};
  CHECK(stokes_residual(zero, {RVector{{0.0, 0.0}}, RVector{{1.0, 0.0}}, RVector{{0.0, 1.0}}, 0.1}) == 0.0);
}

TEST_CASE("Stokes: non-abelian defect is third order") {
  const PatchConnection field = fixtures::su2_field();
  LoopSpec loop{RVector{{0.3, 0.2}}, RVector{{1.0, 0.0}}, RVector{{0.0, 1.0}}, 0.1};
  const double r1 = stokes_residual(field, loop);
  loop.eps = 0.05;
  const double r2 = stokes_residual(field, loop);
  loop.eps = 0.025;
  const double r3 = stokes_residual(field, loop);
  CHECK(r1 / r2 >= 6.0);
  CHECK(r2 / r3 >= 6.0);

  // reversing the orientation inverts the holonomy
  LoopSpec flipped = loop;
  std::swap(flipped.dir1, flipped.dir2);
  const Element h = stokes(field, loop).holonomy, hf = stokes(field, flipped).holonomy;
  CHECK((h * hf - Element::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("Stokes errors") {
  PatchConnection field = fixtures::su2_field();
  field.domain = {RVector{{0.0, 0.0}}, RVector{{1.0, 1.0}}};
  CHECK_NOTHROW(stokes_residual(field, {RVector{{0.5, 0.5}}, RVector{{1.0, 0.0}}, RVector{{0.0, 1.0}}, 0.1}));
  CHECK_THROWS_AS(stokes_residual(field, {RVector{{0.02, 0.5}}, RVector{{1.0, 0.0}}, RVector{{0.0, 1.0}}, 0.1}),
                  PatchDomainError);
  CHECK_THROWS_AS(stokes_residual(field, {RVector{{0.5, 0.5}}, RVector{{1.0, 0.0}}, RVector{{2.0, 0.0}}, 0.1}),
                  DomainError);
  CHECK_THROWS_AS(stokes_residual(field, {RVector{{0.5, 0.5}}, RVector{{1.0, 0.0}}, RVector{{0.0, 1.0}}, -0.1}),
                  DomainError);
}

TEST_CASE("Bianchi residual") {
  const State sum = State::unnormalized_sum();
  const DotConfig cfg;
  CHECK(bianchi_residual(Chart::flat_plane(), sum, cfg, RVector{{0.1, 0.2}}) < 1e-8);

  Xorshift64Star rng(5);
  for (const Chart& chart : {Chart::sphere(1.0), Chart::torus(2.0, 0.5)}) {
    const Chart half = chart.with_steps(chart.steps().scaled(0.5));
    for (int t = 0; t < 5; ++t) {
      const RVector u = chart.sample_point(rng);
      const double r = bianchi_residual(chart, sum, cfg, u);
      CHECK(r < 1e-2);
      CHECK(bianchi_residual(half, sum, cfg, u) <= 0.5 * r);
    }
  }
  CHECK_THROWS_AS(bianchi_residual(Chart::sphere(1.0), sum, cfg, RVector{{-1.0, 0.0}}), EvaluationError);
}

TEST_CASE("Bianchi residual converges on the 3-sphere") {
  // in two dimensions the cyclic sum cancels identically, so the 3-sphere
  // carries the convergence check
  const State sum = State::unnormalized_sum();
  const Chart s3 = Chart::sphere(1.0, 3);
  const RVector u{{1.0, 1.2, 0.3}};
  double last = 0.0;
  for (double f : {20.0, 10.0, 5.0}) {
    const double r = bianchi_residual(s3.with_steps(s3.steps().scaled(f)), sum, DotConfig{}, u);
    CHECK(r > 0.0);
    if (last > 0.0) CHECK(r <= 0.5 * last);
    last = r;
  }
}

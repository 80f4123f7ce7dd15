#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <numbers>

#include "cli_support.hpp"
#include "fixtures.hpp"
#include "opgeom/models.hpp"

using clitest::json;
using clitest::run;
using clitest::Scratch;
using namespace opgeom;

namespace {

const json kSphere = {{"id", "sphere"}, {"params", {{"r", 1.0}}}, {"state", "sum"}};
const json kFlat = {{"id", "flat_plane"}, {"state", "sum"}};

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<double> csv_row(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

json su2_constants() {
  json f = json::array();
  for (int r = 0; r < 3; ++r)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double v = 0.0;
        if (r != a && a != b && r != b) v = ((a - r + 3) % 3 == 1) ? 1.0 : -1.0;
        f.push_back(v);
      }
  return {{"d", 3}, {"f", f}};
}

}  // namespace

TEST_CASE("metric at the equator") {
  Scratch s("metric");
  const auto chart = s.write("sphere.json", kSphere);
  const auto r = run({"metric", "--chart", chart, "--point", "1.5707963,0.0"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["g"][0][0].get<double>() - 1.0) < 1e-7);
  CHECK(std::abs(j["g"][1][1].get<double>() - 1.0) < 1e-7);
  CHECK(std::abs(j["g"][0][1].get<double>()) < 1e-7);
  CHECK(clitest::round_trips(r.out));
}

TEST_CASE("flat geodesic CSV") {
  Scratch s("geo");
  const auto chart = s.write("flat.json", kFlat);
  const auto r = run({"geodesic", "--chart", chart, "--u0", "0,0", "--v0", "1,2", "--tau", "1", "--step", "0.001"});
  REQUIRE(r.code == 0);
  const auto lines = split_lines(r.out);
  CHECK(lines.front() == "tau,u1,u2,du1,du2");
  CHECK(lines.size() == 1002);
  const auto last = csv_row(lines.back());
  CHECK(last[0] == 1.0);
  CHECK(std::abs(last[1] - 1.0) < 1e-10);
  CHECK(std::abs(last[2] - 2.0) < 1e-10);
  CHECK(r.err.empty());

  const auto off = run({"geodesic", "--chart", s.write("s.json", kSphere), "--u0", "0.785398,0", "--v0", "1,0",
                        "--tau", "3"});
  CHECK(off.code == 0);
  CHECK(off.err.rfind("W_LEFT_DOMAIN", 0) == 0);
}

TEST_CASE("input errors exit 1") {
  auto r = run({"metric", "--chart", "/nonexistent/chart.json", "--point", "1,0"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("E_INPUT", 0) == 0);

  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);

  Scratch s("bad");
  const auto chart = s.write("sphere.json", kSphere);
  CHECK(run({"metric", "--chart", chart, "--point", "1,zero"}).err.rfind("E_INPUT", 0) == 0);
  CHECK(run({"metric", "--chart", chart, "--point", "1,2,3"}).err.rfind("E_INPUT", 0) == 0);
  CHECK(run({"metric", "--chart", chart, "--point", "-1,0"}).code == 1);
  CHECK(run({"metric", "--chart", s.write("odd.json", {{"id", "klein"}}), "--point", "1,0"}).code == 1);
  opgeom::io::write_file(s.path("broken.json"), "{\"id\": ");
  CHECK(run({"metric", "--chart", s.path("broken.json"), "--point", "1,0"}).err.rfind("E_INPUT", 0) == 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("numerical failures exit 2") {
  Scratch s("num");
  const auto x = s.write("x.json", io::to_json(models::pauli_x()));
  const auto x2 = s.write("x2.json", io::to_json(Element(2.0 * models::pauli_x())));
  const auto r = run({"orthonormalize", "--matrix", x, "--matrix", x2});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("E_DEPENDENT", 0) == 0);

  json flat_grid = {{"id", "custom_grid"},
                    {"state", "sum"},
                    {"grid", {{"origin", {0.0, 0.0}}, {"spacing", 0.1}, {"shape", {5, 5}}, {"values", json::array()}}}};
  for (int i = 0; i < 25; ++i) flat_grid["grid"]["values"].push_back(io::to_json(Element(Element::Identity(2, 2))));
  const auto m = run({"metric", "--chart", s.write("grid.json", flat_grid), "--point", "0.2,0.2"});
  CHECK(m.code == 2);
  CHECK(m.err.rfind("E_SINGULAR_METRIC", 0) == 0);
  flat_grid["grid"]["values"].erase(0);
  CHECK(run({"metric", "--chart", s.write("short.json", flat_grid), "--point", "0.2,0.2"}).code == 1);
}

TEST_CASE("algebra subcommands") {
  Scratch s("alg");
  const auto x = s.write("x.json", io::to_json(models::pauli_x()));
  const auto y = s.write("y.json", io::to_json(models::pauli_y()));
  const auto z = s.write("z.json", io::to_json(models::pauli_z()));

  auto g = run({"gram", "--matrix", x, "--matrix", y, "--matrix", z});
  REQUIRE(g.code == 0);
  json j = json::parse(g.out);
  CHECK(j["is_full_rank"] == true);
  CHECK(std::abs(j["det"].get<double>() - 1.0) < 1e-14);
  CHECK(clitest::round_trips(g.out));

  auto p = run({"project", "--matrix", x, "--matrix", x, "--matrix", y});
  REQUIRE(p.code == 0);
  j = json::parse(p.out);
  CHECK(std::abs(j["residual"].get<double>()) < 1e-14);
  CHECK(clitest::round_trips(p.out));

  auto o = run({"orthonormalize", "--matrix", x, "--matrix", z, "--out", s.path("on.json")});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  CHECK(clitest::round_trips(clitest::read_text(s.path("on.json"))));

  const models::Oscillator osc;
  const auto xo = s.write("xo.json", io::to_json(osc.position()));
  const auto po = s.write("po.json", io::to_json(osc.momentum()));
  const auto h = s.write("h.json", io::to_json(osc.hamiltonian()));
  const CVector g0 = osc.ground_state();
  json ground = {{"kind", "vector"}, {"re", json::array()}, {"im", json::array()}};
  for (Eigen::Index i = 0; i < g0.size(); ++i) {
    ground["re"].push_back(g0(i).real());
    ground["im"].push_back(g0(i).imag());
  }
  const auto st = s.write("ground.json", ground);
  auto u = run({"uncertainty", "--state", st, "--matrix", xo, "--matrix", po});
  REQUIRE(u.code == 0);
  j = json::parse(u.out);
  CHECK(std::abs(j["pair"]["report"]["lhs"].get<double>() - 0.25) < 1e-8);
  CHECK(clitest::round_trips(u.out));

  auto e = run({"energy-bound", "--state", st, "--matrix", h, "--matrix", xo, "--matrix", po});
  REQUIRE(e.code == 0);
  j = json::parse(e.out);
  CHECK(j["raw"]["satisfied"] == true);
  CHECK(clitest::round_trips(e.out));

  auto v = run({"volume", "--input", s.write("v.json", {{"vectors", {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}}, {"normalized", false}})});
  REQUIRE(v.code == 0);
  j = json::parse(v.out);
  CHECK(std::abs(j["gram_volume"].get<double>() - 36.0) < 1e-12);
  CHECK(std::abs(j["levi_civita_volume"].get<double>() - 36.0) < 1e-12);

  auto k = run({"killing", "--input", s.write("k.json", su2_constants())});
  REQUIRE(k.code == 0);
  j = json::parse(k.out);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(j["g"][a][b].get<double>() - (a == b ? 2.0 / 3.0 : 0.0)) < 1e-12);
}

TEST_CASE("transport subcommands") {
  Scratch s("tr");
  const json path = {{"s0", 0.0}, {"s1", 1.0}, {"n_steps", 10000},
                     {"terms", {io::to_json(fixtures::stored_y()), io::to_json(fixtures::stored_x())}}};
  auto h = run({"holonomy", "--input", s.write("path.json", path)});
  REQUIRE(h.code == 0);
  json j = json::parse(h.out);
  CHECK(j["product_vs_oracle"].get<double>() < 1e-6);
  CHECK(j["order"] == 6);
  const Element pi = io::matrix_from_json(j["product_integral"]);
  CHECK((pi - product_integral(fixtures::stored_path(10000))).norm() == 0.0);
  CHECK(clitest::round_trips(h.out));

  const double c = 0.7;
  const json abelian = {{"a1", {{{"pow", {0, 1}}, {"matrix", {{"dim", 1}, {"re", {-c}}}}}}},
                        {"a2", {{{"pow", {1, 0}}, {"matrix", {{"dim", 1}, {"re", {c}}}}}}},
                        {"base", {0.2, 0.1}},
                        {"eps", 0.1}};
  auto st = run({"stokes", "--input", s.write("abelian.json", abelian)});
  REQUIRE(st.code == 0);
  j = json::parse(st.out);
  CHECK(std::abs(j["curvature"]["re"][0].get<double>() - 2 * c) < 1e-9);
  CHECK(std::abs(j["holonomy"]["re"][0].get<double>() - std::exp(2 * c * 0.01)) < 1e-12);
  CHECK(clitest::round_trips(st.out));

  json outside = abelian;
  outside["domain"] = {{"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}};
  outside["base"] = {0.01, 0.5};
  const auto bad = run({"stokes", "--input", s.write("outside.json", outside)});
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("E_PATCH", 0) == 0);
}

TEST_CASE("geometry subcommands") {
  Scratch s("geom");
  const auto chart = s.write("sphere.json", kSphere);
  for (const char* method : {"direct", "metric"}) {
    auto c = run({"christoffel", "--chart", chart, "--point", "0.7853981633974483,0", "--method", method});
    REQUIRE(c.code == 0);
    const json j = json::parse(c.out);
    CHECK(std::abs(j["gamma"][0][1][1].get<double>() + 0.5) < 1e-5);
    CHECK(clitest::round_trips(c.out));
  }
  CHECK(run({"christoffel", "--chart", chart, "--point", "1,0", "--method", "magic"}).code == 1);

  auto k = run({"curvature", "--chart", chart, "--point", "1,0.5"});
  REQUIRE(k.code == 0);
  CHECK(std::abs(json::parse(k.out)["gaussian_curvature"].get<double>() - 1.0) < 1e-4);
  CHECK(clitest::round_trips(k.out));

  auto b = run({"bianchi", "--chart", s.write("flat.json", kFlat), "--point", "0.1,0.2"});
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["residual"].get<double>() < 1e-8);
}

TEST_CASE("fd step overrides") {
  Scratch s("fd");
  const auto chart = s.write("sphere.json", kSphere);
  const auto base = run({"metric", "--chart", chart, "--point", "1,0"});
  const auto flag = run({"metric", "--chart", chart, "--point", "1,0", "--fd-step", "1e-2"});
  REQUIRE(flag.code == 0);
  CHECK(json::parse(flag.out)["chart"]["fd_step"].get<double>() == 1e-2);
  CHECK(base.out != flag.out);

  ::setenv("OPGEOM_FD_STEP", "1e-2", 1);
  const auto env = run({"metric", "--chart", chart, "--point", "1,0"});
  const auto both = run({"metric", "--chart", chart, "--point", "1,0", "--fd-step", "1e-4"});
  ::unsetenv("OPGEOM_FD_STEP");
  CHECK(env.out == flag.out);
  CHECK(both.out == base.out);

  ::setenv("OPGEOM_FD_STEP", "tiny", 1);
  CHECK(run({"metric", "--chart", chart, "--point", "1,0"}).code == 1);
  ::unsetenv("OPGEOM_FD_STEP");
}

TEST_CASE("report") {
  Scratch s("rep");
  const auto sphere = s.write("sphere.json", kSphere);
  const auto a = run({"report", "--chart", sphere, "--seed", "7", "--out", s.path("a.json")});
  const auto b = run({"report", "--chart", sphere, "--seed", "7", "--out", s.path("b.json")});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const std::string ra = clitest::read_text(s.path("a.json")), rb = clitest::read_text(s.path("b.json"));
  CHECK(!ra.empty());
  CHECK(ra == rb);
  CHECK(clitest::round_trips(ra));

  const json rep = json::parse(ra);
  CHECK(rep["points"].size() == 20);
  CHECK(std::abs(rep["stats"]["gaussian_curvature"]["mean"].get<double>() - 1.0) < 1e-4);
  CHECK(run({"report", "--chart", sphere, "--seed", "8"}).out != ra);

  const auto flat = run({"report", "--chart", s.write("flat.json", kFlat)});
  REQUIRE(flat.code == 0);
  const json fr = json::parse(flat.out);
  for (const char* key : {"riemann_max_abs", "gaussian_curvature", "gauss_curvature_2d"}) {
    CHECK(std::abs(fr["stats"][key]["min"].get<double>()) < 1e-7);
    CHECK(std::abs(fr["stats"][key]["max"].get<double>()) < 1e-7);
  }
  CHECK(run({"report", "--chart", sphere, "--samples", "0"}).code == 1);
}

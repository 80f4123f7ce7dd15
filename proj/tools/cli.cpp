#include "cli.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "opgeom/errors.hpp"
#include "opgeom/hypersurface.hpp"
#include "opgeom/io.hpp"
#include "opgeom/projection.hpp"
#include "opgeom/transport.hpp"
#include "opgeom/uncertainty.hpp"

namespace opgeom::cli {

namespace {

using io::json;

struct Options {
  std::string chart_file;
  std::string state_file;
  std::vector<std::string> matrix_files;
  std::string point;
  std::string u0;
  std::string v0;
  double tau = 1.0;
  double step = 1e-3;
  std::uint64_t seed = 7;
  int samples = 20;
  std::string out_file;
  std::string input_file;
  std::string method = "direct";
  double hbar = 1.0;
  double rank_tol = kRankTol;
  std::optional<double> fd_step;
};

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

std::optional<double> env_fd_step() {
  const char* v = std::getenv("OPGEOM_FD_STEP");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const double h = std::strtod(v, &end);
  if (*end != '\0' || !(h > 0.0) || !std::isfinite(h)) {
    throw InputError(std::string("OPGEOM_FD_STEP is not a positive number: ") + v);
  }
  return h;
}

io::ChartSpec load_chart(const Options& o) {
  if (o.chart_file.empty()) throw InputError("--chart is required");
  std::optional<double> h = env_fd_step();
  if (o.fd_step) h = o.fd_step;
  io::ChartSpec spec = io::chart_from_json(io::read_file(o.chart_file), h);
  if (o.fd_step) {
    FdSteps s = spec.chart.steps();
    s.first = *o.fd_step;
    spec.chart = spec.chart.with_steps(s);
  }
  if (!o.state_file.empty()) spec.state = io::state_from_json(io::read_file(o.state_file));
  return spec;
}

State load_state(const Options& o) {
  if (o.state_file.empty()) return State::normalized_trace();
  return io::state_from_json(io::read_file(o.state_file));
}

std::vector<Element> load_matrices(const Options& o, std::size_t at_least) {
  if (o.matrix_files.size() < at_least) {
    throw InputError("need at least " + std::to_string(at_least) + " --matrix file(s)");
  }
  std::vector<Element> out;
  for (const auto& f : o.matrix_files) out.push_back(io::matrix_from_json(io::read_file(f)));
  return out;
}

RVector load_point(const std::string& text, const char* flag, Eigen::Index p) {
  if (text.empty()) throw InputError(std::string(flag) + " is required");
  RVector u = io::parse_csv_vector(text);
  if (u.size() != p) {
    throw InputError(std::string(flag) + " needs " + std::to_string(p) + " coordinates");
  }
  return u;
}

json load_input(const Options& o) {
  if (o.input_file.empty()) throw InputError("--input is required");
  return io::read_file(o.input_file);
}

json report_json(const BoundReport& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"satisfied", r.satisfied},
          {"singular", r.singular}};
}

json matrices_json(const std::vector<Element>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(io::to_json(m));
  return out;
}

// ---------------------------------------------------------------------------

json cmd_gram(const Options& o) {
  const State phi = load_state(o);
  const GramMatrix g = gram(phi, DotConfig{}, load_matrices(o, 1), o.rank_tol);
  return {{"m", io::to_json(g.m)},
          {"det", g.det},
          {"rank_tol", g.rank_tol},
          {"is_full_rank", g.is_full_rank},
          {"eigenvalues", io::to_json(g.eigenvalues)},
          {"inverse_or_pseudo", io::to_json(g.inverse_or_pseudo)}};
}

json cmd_project(const Options& o) {
  const State phi = load_state(o);
  auto ms = load_matrices(o, 2);
  const Element a = ms.front();
  ms.erase(ms.begin());
  const ProjectionResult r = project(phi, DotConfig{}, a, ms, o.rank_tol);
  return {{"coefficients", io::to_json(r.coefficients)},
          {"parallel", io::to_json(r.parallel)},
          {"perpendicular", io::to_json(r.perpendicular)},
          {"norm_sq_parallel", r.norm_sq_parallel},
          {"residual", r.residual},
          {"singular", r.singular}};
}

json cmd_orthonormalize(const Options& o) {
  const State phi = load_state(o);
  const GramSchmidtResult r = gram_schmidt(phi, DotConfig{}, load_matrices(o, 1), o.rank_tol);
  return {{"orthogonal", matrices_json(r.orthogonal)}, {"orthonormal", matrices_json(r.orthonormal)}};
}

json cmd_uncertainty(const Options& o) {
  const State phi = load_state(o);
  auto ms = load_matrices(o, 2);
  const Element a = ms.front();
  ms.erase(ms.begin());
  json out = {{"variance", variance(phi, a)},
              {"fluctuation", report_json(fluctuation_bound(phi, DotConfig{}, a, ms))}};
  if (ms.size() == 1) {
    const PairBound pb = pair_product_bound(phi, a, ms[0], o.hbar);
    out["pair"] = {{"report", report_json(pb.report)},
                   {"commutator_abs", pb.commutator_abs},
                   {"commutator_scale", pb.commutator_scale}};
  }
  return out;
}

json cmd_energy_bound(const Options& o) {
  const State phi = load_state(o);
  auto ms = load_matrices(o, 2);
  const Element h = ms.front();
  ms.erase(ms.begin());
  PhysConstants consts;
  consts.hbar = o.hbar;
  const EnergyBound eb = energy_bound(consts, phi, DotConfig{}, h, ms);
  return {{"raw", report_json(eb.raw)}, {"fluct", report_json(eb.fluct)},
          {"rates", io::to_json(eb.rates)}};
}

json point_header(const io::ChartSpec& spec, const RVector& u) {
  return {{"chart", io::chart_to_json(spec.chart, spec.state)}, {"point", io::to_json(u)}};
}

json cmd_metric(const Options& o) {
  const auto spec = load_chart(o);
  const RVector u = load_point(o.point, "--point", spec.chart.p());
  const MetricField m = metric(spec.chart, spec.state, DotConfig{}, u);
  json out = point_header(spec, u);
  out["g"] = io::to_json(m.g);
  out["g_inv"] = io::to_json(m.g_inv);
  out["det"] = m.g.determinant();
  return out;
}

json cmd_christoffel(const Options& o) {
  const auto spec = load_chart(o);
  const RVector u = load_point(o.point, "--point", spec.chart.p());
  ChristoffelMethod method = ChristoffelMethod::Direct;
  if (o.method == "metric") {
    method = ChristoffelMethod::Metric;
  } else if (o.method != "direct") {
    throw InputError("--method must be direct or metric");
  }
  json out = point_header(spec, u);
  out["method"] = o.method;
  out["gamma"] = io::to_json(christoffel(spec.chart, spec.state, DotConfig{}, u, method));
  return out;
}

json cmd_curvature(const Options& o) {
  const auto spec = load_chart(o);
  const RVector u = load_point(o.point, "--point", spec.chart.p());
  const DotConfig cfg;
  const CurvatureField r = curvature(spec.chart, spec.state, cfg, u);
  json out = point_header(spec, u);
  out["riemann"] = io::to_json(r);
  if (spec.chart.p() == 2) {
    out["gaussian_curvature"] = gaussian_curvature(r, metric(spec.chart, spec.state, cfg, u));
    out["gauss_curvature_2d"] = gauss_curvature_2d(spec.chart, spec.state, cfg, u);
  }
  return out;
}

std::string cmd_geodesic(const Options& o, std::ostream& err) {
  const auto spec = load_chart(o);
  const RVector u0 = load_point(o.u0, "--u0", spec.chart.p());
  const RVector v0 = load_point(o.v0, "--v0", spec.chart.p());
  const GeodesicResult r = geodesic(spec.chart, spec.state, DotConfig{}, u0, v0, o.tau, o.step);
  if (r.left_domain) {
    err << "W_LEFT_DOMAIN: geodesic stopped at tau = " << io::format_double(r.states.back().tau)
        << '\n';
  }
  std::ostringstream csv;
  io::write_geodesic_csv(csv, r);
  return csv.str();
}

json cmd_holonomy(const Options& o) {
  const json in = load_input(o);
  const ConnectionPath path = io::path_from_json(in);
  int order = kMaxSeriesOrder;
  if (in.contains("order")) {
    if (!in.at("order").is_number_integer()) throw InputError("order must be an integer");
    order = in.at("order").get<int>();
  }
  const Element pi = product_integral(path);
  const Element oracle = transport_oracle(path);
  const Element series = ordered_series(path, order);
  const double scale = oracle.norm();
  return {{"product_integral", io::to_json(pi)},
          {"oracle", io::to_json(oracle)},
          {"series", io::to_json(series)},
          {"order", order},
          {"n_steps", path.n_steps},
          {"product_vs_oracle", (pi - oracle).norm() / scale},
          {"series_vs_oracle", (series - oracle).norm() / scale}};
}

json cmd_stokes(const Options& o) {
  const json in = load_input(o);
  const PatchConnection field = io::patch_from_json(in);
  const LoopSpec loop = io::loop_from_json(in.contains("loop") ? in.at("loop") : in);
  int per_side = 256;
  if (in.contains("steps_per_side")) {
    if (!in.at("steps_per_side").is_number_integer()) throw InputError("steps_per_side must be an integer");
    per_side = in.at("steps_per_side").get<int>();
  }
  const StokesResult r = stokes(field, loop, per_side);
  return {{"eps", loop.eps},
          {"holonomy", io::to_json(r.holonomy)},
          {"curvature", io::to_json(r.curvature)},
          {"residual", r.residual}};
}

json cmd_bianchi(const Options& o) {
  const auto spec = load_chart(o);
  const RVector u = load_point(o.point, "--point", spec.chart.p());
  json out = point_header(spec, u);
  out["residual"] = bianchi_residual(spec.chart, spec.state, DotConfig{}, u);
  return out;
}

json cmd_volume(const Options& o) {
  const json in = load_input(o);
  const json& vs = in.contains("vectors") ? in.at("vectors") : json();
  if (!vs.is_array() || vs.empty()) throw InputError("volume input needs a non-empty \"vectors\" array");
  std::vector<RVector> vectors;
  for (const auto& v : vs) vectors.push_back(io::vector_from_json(v));
  const bool normalized = in.value("normalized", true);
  json out = {{"normalized", normalized},
              {"gram_volume", parallelepiped_volume(vectors, normalized)}};
  if (vectors.front().size() <= 6) {
    out["levi_civita_volume"] = parallelepiped_volume_levi_civita(vectors, normalized);
  }
  return out;
}

json cmd_killing(const Options& o) {
  const json in = load_input(o);
  if (!in.contains("d") || !in.at("d").is_number_integer()) throw InputError("killing input needs integer \"d\"");
  if (!in.contains("f") || !in.at("f").is_array()) throw InputError("killing input needs array \"f\"");
  std::vector<double> f;
  for (const auto& x : in.at("f")) {
    if (!x.is_number()) throw InputError("structure constants must be numbers");
    f.push_back(x.get<double>());
  }
  return {{"g", io::to_json(killing_metric(f, in.at("d").get<int>()))}};
}

// ---------------------------------------------------------------------------

struct Stat {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  int n = 0;

  void add(double x) {
    min = std::min(min, x);
    max = std::max(max, x);
    sum += x;
    ++n;
  }
  json to_json() const { return {{"min", min}, {"max", max}, {"mean", n ? sum / n : 0.0}}; }
};

json cmd_report(const Options& o) {
  const auto spec = load_chart(o);
  if (o.samples < 1) throw InputError("--samples must be positive");
  const Chart& chart = spec.chart;
  const State& phi = spec.state;
  const DotConfig cfg;
  const bool two_d = chart.p() == 2;

  Xorshift64Star rng(o.seed);
  std::map<std::string, Stat> stats;
  json points = json::array();
  for (int i = 0; i < o.samples; ++i) {
    const RVector u = chart.sample_point(rng);
    const MetricField m = metric(chart, phi, cfg, u);
    const Tensor3 gd = christoffel(chart, phi, cfg, u, ChristoffelMethod::Direct);
    const Tensor3 gm = christoffel(chart, phi, cfg, u, ChristoffelMethod::Metric);
    const Tensor4 r = curvature(chart, phi, cfg, u);
    json pt = {{"u", io::to_json(u)},
               {"metric_det", m.g.determinant()},
               {"christoffel_max_abs", gd.max_abs()},
               {"christoffel_method_diff", gd.max_diff(gm)},
               {"metric_compat_residual", metric_compat_residual(chart, phi, cfg, u)},
               {"riemann_max_abs", r.max_abs()},
               {"bianchi_residual", bianchi_residual(chart, phi, cfg, u)}};
    if (two_d) {
      pt["gaussian_curvature"] = gaussian_curvature(r, m);
      pt["gauss_curvature_2d"] = gauss_curvature_2d(chart, phi, cfg, u);
    }
    for (auto it = pt.begin(); it != pt.end(); ++it) {
      if (it.key() != "u") stats[it.key()].add(it.value().get<double>());
    }
    points.push_back(std::move(pt));
  }
  json st = json::object();
  for (const auto& [k, s] : stats) st[k] = s.to_json();
  return {{"chart", io::chart_to_json(chart, phi)},
          {"seed", o.seed},
          {"samples", o.samples},
          {"stats", st},
          {"points", points}};
}

// ---------------------------------------------------------------------------

void add_state(CLI::App* sub, Options& o) {
  sub->add_option("--state", o.state_file, "state JSON file")->check(CLI::ExistingFile);
}
void add_chart(CLI::App* sub, Options& o) {
  sub->add_option("--chart", o.chart_file, "chart JSON file")->required()->check(CLI::ExistingFile);
  add_state(sub, o);
  sub->add_option("--fd-step", o.fd_step, "first-derivative step");
}
void add_matrices(CLI::App* sub, Options& o) {
  sub->add_option("--matrix", o.matrix_files, "matrix JSON file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  add_state(sub, o);
}
void add_input(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input_file, "input JSON file")->required()->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Operator-algebra geometry toolkit", "opgeom"};
  app.require_subcommand(1, 1);
  app.add_option("--out", o.out_file, "output file (default stdout)");

  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--out", o.out_file, "output file (default stdout)");
    subs[name] = s;
    return s;
  };

  {
    auto* s = sub("gram", "Gram matrix of --matrix elements");
    add_matrices(s, o);
    s->add_option("--rank-tol", o.rank_tol, "relative rank tolerance");
  }
  {
    auto* s = sub("project", "project the first --matrix onto the span of the rest");
    add_matrices(s, o);
    s->add_option("--rank-tol", o.rank_tol, "relative rank tolerance");
  }
  {
    auto* s = sub("orthonormalize", "Gram-Schmidt of --matrix elements");
    add_matrices(s, o);
    s->add_option("--rank-tol", o.rank_tol, "relative rank tolerance");
  }
  {
    auto* s = sub("uncertainty", "fluctuation bound of the first --matrix against the rest");
    add_matrices(s, o);
    s->add_option("--hbar", o.hbar, "expected commutator scale");
  }
  {
    auto* s = sub("energy-bound", "energy bound for H (first --matrix) and observables");
    add_matrices(s, o);
    s->add_option("--hbar", o.hbar, "reduced Planck constant");
  }
  for (const char* name : {"metric", "christoffel", "curvature", "bianchi"}) {
    auto* s = sub(name, std::string(name) + " at --point");
    add_chart(s, o);
    s->add_option("--point", o.point, "comma-separated parameters")->required();
    if (std::string(name) == "christoffel") s->add_option("--method", o.method, "direct or metric");
  }
  {
    auto* s = sub("geodesic", "integrate a geodesic, CSV output");
    add_chart(s, o);
    s->add_option("--u0", o.u0, "initial point")->required();
    s->add_option("--v0", o.v0, "initial velocity")->required();
    s->add_option("--tau", o.tau, "affine parameter range")->required();
    s->add_option("--step", o.step, "integrator step");
  }
  {
    auto* s = sub("holonomy", "path-ordered exponential of a polynomial connection");
    add_input(s, o);
  }
  {
    auto* s = sub("stokes", "small-loop holonomy against the curvature");
    add_input(s, o);
  }
  {
    auto* s = sub("volume", "parallelepiped volume of real vectors");
    add_input(s, o);
  }
  {
    auto* s = sub("killing", "Killing-type metric from structure constants");
    add_input(s, o);
  }
  {
    auto* s = sub("report", "curvature statistics over seeded sample points");
    add_chart(s, o);
    s->add_option("--seed", o.seed, "sampling seed");
    s->add_option("--samples", o.samples, "number of sample points");
  }

  std::vector<const char*> argv{"opgeom"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "E_INPUT: " << one_line(e.what()) << '\n';
    return 1;
  }

  std::string name;
  for (const auto& [n, s] : subs)
    if (s->parsed()) name = n;

  try {
    std::string text;
    if (name == "geodesic") {
      text = cmd_geodesic(o, err);
    } else {
      static const std::map<std::string, std::function<json(const Options&)>> table = {
          {"gram", cmd_gram},         {"project", cmd_project},
          {"orthonormalize", cmd_orthonormalize},
          {"uncertainty", cmd_uncertainty},
          {"energy-bound", cmd_energy_bound},
          {"metric", cmd_metric},     {"christoffel", cmd_christoffel},
          {"curvature", cmd_curvature},
          {"holonomy", cmd_holonomy}, {"stokes", cmd_stokes},
          {"bianchi", cmd_bianchi},   {"volume", cmd_volume},
          {"killing", cmd_killing},   {"report", cmd_report}};
      text = io::dump(table.at(name)(o));
    }
    if (o.out_file.empty()) {
      out << text;
    } else {
      io::write_file(o.out_file, text);
    }
    return 0;
  } catch (const Error& e) {
    err << e.code() << ": " << one_line(e.what()) << '\n';
    return e.numerical() ? 2 : 1;
  } catch (const json::exception& e) {
    err << "E_INPUT: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "E_INTERNAL: " << one_line(e.what()) << '\n';
    return 2;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace opgeom::cli

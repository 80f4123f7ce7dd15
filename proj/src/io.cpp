#include "opgeom/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "opgeom/errors.hpp"

namespace opgeom::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool is_container(const json& j) { return j.is_array() || j.is_object(); }

void emit(const json& j, int indent, int level, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && !is_container(e);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat || indent == 0 ? ", " : ",";
        if (!flat) (out += nl) += pad;
        emit(e, indent, level + 1, out);
        first = false;
      }
      if (!flat) (out += nl) += close_pad;
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        (out += nl) += pad;
        out += json(it.key()).dump();
        out += ": ";
        emit(it.value(), indent, level + 1, out);
        first = false;
      }
      (out += nl) += close_pad;
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string(what) + " must be finite");
  return x;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(number(e, what));
  return out;
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += '\n';
  return out;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

RVector parse_csv_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: \"" + item + "\"");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(x)) throw InputError("not a number: \"" + item + "\"");
    values.push_back(x);
  }
  if (values.empty()) throw InputError("empty coordinate list");
  return RVector::Map(values.data(), static_cast<Eigen::Index>(values.size()));
}

// ---------------------------------------------------------------------------

json to_json(const Element& a) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      re.push_back(a(i, j).real());
      im.push_back(a(i, j).imag());
    }
  return {{"dim", a.rows()}, {"re", re}, {"im", im}};
}

Element matrix_from_json(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) throw InputError("dim must be a positive integer");
  const auto n = static_cast<Eigen::Index>(d.get<long long>());
  const auto re = numbers(field(j, "re"), "re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = numbers(j.at("im"), "im");
  const auto expected = static_cast<std::size_t>(n * n);
  if (re.size() != expected || im.size() != expected) {
    throw InputError("matrix of dim " + std::to_string(n) + " needs " + std::to_string(expected) +
                     " entries in re and im");
  }
  Element a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto k = static_cast<std::size_t>(r * n + c);
      a(r, c) = Complex(re[k], im[k]);
    }
  return a;
}

json to_json(const RMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Tensor3& t) {
  const auto p = t.p();
  json out = json::array();
  for (Eigen::Index i = 0; i < p; ++i) {
    json a = json::array();
    for (Eigen::Index j = 0; j < p; ++j) {
      json b = json::array();
      for (Eigen::Index k = 0; k < p; ++k) b.push_back(t(i, j, k));
      a.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

json to_json(const Tensor4& t) {
  const auto p = t.p();
  json out = json::array();
  for (Eigen::Index i = 0; i < p; ++i) {
    json a = json::array();
    for (Eigen::Index j = 0; j < p; ++j) {
      json b = json::array();
      for (Eigen::Index k = 0; k < p; ++k) {
        json c = json::array();
        for (Eigen::Index l = 0; l < p; ++l) c.push_back(t(i, j, k, l));
        b.push_back(std::move(c));
      }
      a.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

RVector vector_from_json(const json& j) {
  const auto v = numbers(j, "vector");
  return RVector::Map(v.data(), static_cast<Eigen::Index>(v.size()));
}

RMatrix real_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  RMatrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = numbers(j[static_cast<std::size_t>(i)], "matrix row");
    if (i == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) throw InputError("ragged matrix rows");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

// ---------------------------------------------------------------------------

const char* kind_name(State::Kind k) {
  switch (k) {
    case State::Kind::NormalizedTrace: return "trace";
    case State::Kind::UnnormalizedSum: return "sum";
    case State::Kind::Vector: return "vector";
    case State::Kind::Density: return "density";
    case State::Kind::Gibbs: return "gibbs";
  }
  return "unknown";
}

json to_json(const State& s) {
  json out = {{"kind", kind_name(s.kind())}};
  switch (s.kind()) {
    case State::Kind::Vector: {
      json re = json::array(), im = json::array();
      for (Eigen::Index i = 0; i < s.psi().size(); ++i) {
        re.push_back(s.psi()(i).real());
        im.push_back(s.psi()(i).imag());
      }
      out["re"] = re;
      out["im"] = im;
      break;
    }
    case State::Kind::Density: out["rho"] = to_json(s.density_matrix(s.dim())); break;
    case State::Kind::Gibbs:
      out["hamiltonian"] = to_json(s.hamiltonian());
      if (std::isinf(s.beta())) {
        out["beta"] = "inf";
      } else {
        out["beta"] = s.beta();
      }
      break;
    default: break;
  }
  return out;
}

State state_from_json(const json& j) {
  const json& k = field(j, "kind");
  if (!k.is_string()) throw InputError("state kind must be a string");
  const auto kind = k.get<std::string>();
  if (kind == "trace") return State::normalized_trace();
  if (kind == "sum") return State::unnormalized_sum();
  if (kind == "vector") {
    const auto re = numbers(field(j, "re"), "re");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = numbers(j.at("im"), "im");
    if (re.empty() || im.size() != re.size()) throw InputError("vector state needs equal-length re and im");
    CVector psi(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) psi(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    return State::vector(std::move(psi));
  }
  if (kind == "density") return State::density(matrix_from_json(field(j, "rho")));
  if (kind == "gibbs") {
    const json& b = field(j, "beta");
    double beta = 0.0;
    if (b.is_string()) {
      const auto t = b.get<std::string>();
      if (t != "inf" && t != "infinity") throw InputError("beta must be a number or \"inf\"");
      beta = std::numeric_limits<double>::infinity();
    } else {
      beta = number(b, "beta");
    }
    return State::gibbs(matrix_from_json(field(j, "hamiltonian")), beta);
  }
  throw InputError("unknown state kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

namespace {

double param(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  return number(params.at(key), key);
}

GridSamples grid_from_json(const json& g) {
  GridSamples grid;
  grid.origin = vector_from_json(field(g, "origin"));
  grid.spacing = number(field(g, "spacing"), "spacing");
  const json& shape = field(g, "shape");
  if (!shape.is_array()) throw InputError("grid shape must be an array");
  for (const auto& n : shape) {
    if (!n.is_number_integer()) throw InputError("grid shape entries must be integers");
    grid.shape.push_back(static_cast<Eigen::Index>(n.get<long long>()));
  }
  const json& values = field(g, "values");
  if (!values.is_array()) throw InputError("grid values must be an array of matrices");
  for (const auto& v : values) grid.values.push_back(matrix_from_json(v));
  return grid;
}

}  // namespace

ChartSpec chart_from_json(const json& j, std::optional<double> default_first_step) {
  if (!j.is_object()) throw InputError("chart must be a JSON object");
  const json& idj = field(j, "id");
  if (!idj.is_string()) throw InputError("chart id must be a string");
  const auto id = idj.get<std::string>();
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw InputError("chart params must be an object");

  std::optional<Chart> chart;
  if (id == "flat_plane") {
    chart = Chart::flat_plane();
  } else if (id == "sphere") {
    const double dim = param(params, "dim", 2.0);
    if (dim != std::floor(dim)) throw InputError("sphere dim must be an integer");
    chart = Chart::sphere(param(params, "r", 1.0), static_cast<int>(dim));
  } else if (id == "torus") {
    chart = Chart::torus(param(params, "R", 2.0), param(params, "r", 0.5));
  } else if (id == "paraboloid") {
    chart = Chart::paraboloid(param(params, "a", 1.0));
  } else if (id == "custom_grid") {
    chart = Chart::custom_grid(grid_from_json(field(j, "grid")));
  } else {
    throw InputError("unknown chart id \"" + id + "\"");
  }

  FdSteps steps = chart->steps();
  if (default_first_step) steps.first = *default_first_step;
  if (j.contains("fd_step")) steps.first = number(j.at("fd_step"), "fd_step");
  if (j.contains("fd_step2")) steps.second = number(j.at("fd_step2"), "fd_step2");
  if (j.contains("fd_step_outer")) steps.outer = number(j.at("fd_step_outer"), "fd_step_outer");
  Chart c = chart->with_steps(steps);

  State state = State::normalized_trace();
  if (j.contains("state")) {
    const json& s = j.at("state");
    state = s.is_string() ? state_from_json(json{{"kind", s}}) : state_from_json(s);
  }
  return {std::move(c), std::move(state)};
}

json chart_to_json(const Chart& chart, const State& state) {
  json params = json::object();
  for (const auto& [k, v] : chart.params()) params[k] = v;
  json out = {{"id", chart.id()},
              {"params", params},
              {"fd_step", chart.steps().first},
              {"fd_step2", chart.steps().second},
              {"fd_step_outer", chart.steps().outer}};
  if (state.kind() == State::Kind::NormalizedTrace || state.kind() == State::Kind::UnnormalizedSum) {
    out["state"] = kind_name(state.kind());
  } else {
    out["state"] = to_json(state);
  }
  return out;
}

// ---------------------------------------------------------------------------

ConnectionPath path_from_json(const json& j) {
  const json& terms = field(j, "terms");
  if (!terms.is_array() || terms.empty()) throw InputError("path terms must be a non-empty array");
  std::vector<Element> coeffs;
  for (const auto& t : terms) coeffs.push_back(matrix_from_json(t));
  for (const auto& c : coeffs) {
    if (c.rows() != coeffs[0].rows()) throw InputError("path terms differ in dimension");
  }
  ConnectionPath path;
  path.s0 = j.contains("s0") ? number(j.at("s0"), "s0") : 0.0;
  path.s1 = j.contains("s1") ? number(j.at("s1"), "s1") : 1.0;
  if (j.contains("n_steps")) {
    if (!j.at("n_steps").is_number_integer()) throw InputError("n_steps must be an integer");
    path.n_steps = j.at("n_steps").get<int>();
  }
  path.a = [coeffs](double s) {
    Element a = coeffs.back();
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) a = (a * s + *it).eval();
    return a;
  };
  return path;
}

namespace {

struct Monomial {
  int j = 0;
  int k = 0;
  Element m;
};

std::vector<Monomial> monomials(const json& list, const char* what) {
  if (!list.is_array()) throw InputError(std::string(what) + " must be an array of terms");
  std::vector<Monomial> out;
  for (const auto& t : list) {
    const json& pw = field(t, "pow");
    if (!pw.is_array() || pw.size() != 2 || !pw[0].is_number_integer() || !pw[1].is_number_integer() ||
        pw[0].get<int>() < 0 || pw[1].get<int>() < 0) {
      throw InputError("pow must be two non-negative integers");
    }
    out.push_back({pw[0].get<int>(), pw[1].get<int>(), matrix_from_json(field(t, "matrix"))});
  }
  return out;
}

}  // namespace

PatchConnection patch_from_json(const json& j) {
  const auto a1 = monomials(field(j, "a1"), "a1");
  const auto a2 = monomials(field(j, "a2"), "a2");
  if (a1.empty() && a2.empty()) throw InputError("patch field has no terms");
  const Eigen::Index n = a1.empty() ? a2[0].m.rows() : a1[0].m.rows();
  for (const auto* list : {&a1, &a2})
    for (const auto& t : *list)
      if (t.m.rows() != n) throw InputError("patch field terms differ in dimension");

  PatchConnection field_out;
  field_out.a = [a1, a2, n](const RVector& u) {
    std::array<Element, 2> out{Element::Zero(n, n), Element::Zero(n, n)};
    for (const auto& t : a1) out[0] += std::pow(u(0), t.j) * std::pow(u(1), t.k) * t.m;
    for (const auto& t : a2) out[1] += std::pow(u(0), t.j) * std::pow(u(1), t.k) * t.m;
    return out;
  };
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    field_out.domain.lower = vector_from_json(field(d, "lower"));
    field_out.domain.upper = vector_from_json(field(d, "upper"));
    if (field_out.domain.lower.size() != 2 || field_out.domain.upper.size() != 2) {
      throw InputError("patch domain needs two lower and two upper bounds");
    }
  }
  return field_out;
}

LoopSpec loop_from_json(const json& j) {
  LoopSpec loop;
  loop.base = vector_from_json(field(j, "base"));
  loop.eps = number(field(j, "eps"), "eps");
  loop.dir1 = j.contains("dir1") ? vector_from_json(j.at("dir1")) : RVector{{1.0, 0.0}};
  loop.dir2 = j.contains("dir2") ? vector_from_json(j.at("dir2")) : RVector{{0.0, 1.0}};
  return loop;
}

void write_geodesic_csv(std::ostream& out, const GeodesicResult& result) {
  if (result.states.empty()) return;
  const Eigen::Index p = result.states.front().u.size();
  out << "tau";
  for (Eigen::Index i = 1; i <= p; ++i) out << ",u" << i;
  for (Eigen::Index i = 1; i <= p; ++i) out << ",du" << i;
  out << '\n';
  for (const auto& s : result.states) {
    out << format_double(s.tau);
    for (Eigen::Index i = 0; i < p; ++i) out << ',' << format_double(s.u(i));
    for (Eigen::Index i = 0; i < p; ++i) out << ',' << format_double(s.udot(i));
    out << '\n';
  }
}

}  // namespace opgeom::io

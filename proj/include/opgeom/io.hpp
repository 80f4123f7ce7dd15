#pragma once

// JSON and CSV serialization of algebra elements, states, charts and the
// connection inputs used by the command-line tool.
//
//   matrix  {"dim": n, "re": [n*n, row-major], "im": [n*n, row-major]}
//   state   {"kind": "trace" | "sum"}
//           {"kind": "vector", "re": [...], "im": [...]}
//           {"kind": "density", "rho": matrix}
//           {"kind": "gibbs", "hamiltonian": matrix, "beta": real | "inf"}
//   chart   {"id": "sphere", "params": {"r": 1.0}, "state": "sum",
//            "fd_step": 1e-4, "fd_step2": 1e-3, "fd_step_outer": 1e-3}
//
// Doubles are printed with 17 significant digits.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opgeom/algebra.hpp"
#include "opgeom/chart.hpp"
#include "opgeom/hypersurface.hpp"
#include "opgeom/transport.hpp"

namespace opgeom::io {

using json = nlohmann::json;

/// "%.17g"; non-finite values print as inf, -inf and nan.
std::string format_double(double x);

/// Serialized JSON text; floating-point numbers use format_double and
/// non-finite numbers become null.
std::string dump(const json& j, int indent = 2);

/// Reads and parses a JSON file. InputError if missing or malformed.
json read_file(const std::string& path);
/// Writes text to `path`. InputError if the file cannot be opened.
void write_file(const std::string& path, const std::string& text);

/// Comma-separated reals, e.g. "1.5,0". InputError on malformed text.
RVector parse_csv_vector(const std::string& text);

json to_json(const Element& a);
Element matrix_from_json(const json& j);

json to_json(const RMatrix& m);  // nested rows
json to_json(const RVector& v);
json to_json(const Tensor3& t);  // t[i][j][k]
json to_json(const Tensor4& t);
RVector vector_from_json(const json& j);
RMatrix real_matrix_from_json(const json& j);

const char* kind_name(State::Kind k);
json to_json(const State& s);
State state_from_json(const json& j);

struct ChartSpec {
  Chart chart;
  State state;
};

/// Builds a chart and its ambient state. The state field is either a kind
/// string ("trace", "sum") or a full state object; it defaults to "trace".
/// `default_first_step`, when set, replaces the built-in first-derivative
/// step unless the document gives "fd_step" itself.
ChartSpec chart_from_json(const json& j, std::optional<double> default_first_step = std::nullopt);
json chart_to_json(const Chart& chart, const State& state);

/// Polynomial connection path {"s0", "s1", "n_steps", "terms": [matrix, ...]}
/// with A(s) = sum_k s^k terms[k].
ConnectionPath path_from_json(const json& j);

/// Polynomial patch field
/// {"a1": [{"pow": [j, k], "matrix": m}, ...], "a2": [...]} with
/// A_i(u) = sum u1^j u2^k m.
PatchConnection patch_from_json(const json& j);

/// Stokes loop {"base": [..], "eps": e, "dir1": [1, 0], "dir2": [0, 1]}.
LoopSpec loop_from_json(const json& j);

/// Header `tau,u1,...,up,du1,...,dup`, one row per state.
void write_geodesic_csv(std::ostream& out, const GeodesicResult& result);

}  // namespace opgeom::io

#pragma once

// Stored connections shared by the transport tests and the acceptance run.

#include <array>
#include <cmath>

#include "opgeom/models.hpp"
#include "opgeom/transport.hpp"

namespace fixtures {

using opgeom::Complex;
using opgeom::Element;

inline Element stored_x() {
  Element x(2, 2);
  x << Complex(0, 1), 1.0, -1.0, Complex(0, -0.5);
  return x;
}

inline Element stored_y() {
  Element y(2, 2);
  y << 0.3, Complex(0, 0.7), Complex(0.2, 0.1), -0.4;
  return y;
}

/// A(s) = s X + Y on [0, 1]; X and Y do not commute.
inline opgeom::ConnectionPath stored_path(int n_steps) {
  const Element x = stored_x(), y = stored_y();
  return {[x, y](double s) { return Element(s * x + y); }, 0.0, 1.0, n_steps};
}

/// su(2)-valued one-form with non-vanishing commutator term.
inline opgeom::PatchConnection su2_field() {
  const Complex i(0, 1);
  const Element sx = opgeom::models::pauli_x(), sy = opgeom::models::pauli_y(), sz = opgeom::models::pauli_z();
  return {[=](const opgeom::RVector& v) {
            return std::array<Element, 2>{Element(i * (std::sin(v(1)) * sx + v(0) * sz)),
                                          Element(i * (std::cos(v(0)) * sy + v(0) * v(1) * sx))};
          },
          {}};
}

}  // namespace fixtures

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "opgeom/algebra.hpp"
#include "opgeom/random.hpp"

namespace opgeom {

/// Finite-difference steps. `first` differentiates the chart map once
/// (tangent vectors), `second` is used for second chart derivatives and
/// for differentiating first-derivative quantities (metric, frames),
/// `outer` for derivatives of already twice-differentiated quantities
/// (connection -> curvature, curvature -> Bianchi residual).
struct FdSteps {
  double first = 1e-4;
  double second = 1e-3;
  double outer = 1e-3;

  FdSteps scaled(double factor) const { return {first * factor, second * factor, outer * factor}; }
};

/// Axis-aligned open box of parameter values; infinite bounds allowed.
struct ParamBox {
  RVector lower;
  RVector upper;

  bool contains(const RVector& u) const;
};

/// Regular grid of pre-sampled chart values b(u), row-major over the axes
/// (last axis fastest). Derivatives use the grid spacing as their step and
/// the chart can only be evaluated at grid nodes.
struct GridSamples {
  RVector origin;
  double spacing = 0.0;
  std::vector<Eigen::Index> shape;
  std::vector<Element> values;
};

/// A parametrized hypersurface u -> b(u) inside the algebra.
class Chart {
 public:
  using Map = std::function<Element(const RVector&)>;

  Chart(std::string id, Map map, ParamBox domain, ParamBox sample_box, FdSteps steps = {});

  /// (u1, u2) -> diag(u1, u2, 0).
  static Chart flat_plane();
  /// Round sphere of radius r with `dim` angles. For dim = 2 the
  /// parameters are (theta, phi) with metric diag(r^2, r^2 sin^2 theta);
  /// higher dim uses hyperspherical angles, the last one azimuthal.
  static Chart sphere(double r, int dim = 2);
  /// (theta, phi) -> ((R + r cos theta) cos phi, (R + r cos theta) sin phi, r sin theta).
  static Chart torus(double major, double minor);
  /// (u1, u2) -> (u1, u2, a (u1^2 + u2^2)).
  static Chart paraboloid(double a);
  static Chart custom_grid(GridSamples grid);

  const std::string& id() const noexcept { return id_; }
  Eigen::Index p() const noexcept { return domain_.lower.size(); }
  const FdSteps& steps() const noexcept { return steps_; }
  const ParamBox& domain() const noexcept { return domain_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }

  /// Copy with different finite-difference steps. Grid charts keep their
  /// spacing regardless.
  Chart with_steps(const FdSteps& steps) const;

  bool contains(const RVector& u) const { return domain_.contains(u); }

  /// b(u); EvaluationError outside the domain.
  Element operator()(const RVector& u) const;

  /// Uniform point of the sampling box (a compact set of interior points).
  RVector sample_point(Xorshift64Star& rng) const;

 private:
  std::string id_;
  Map map_;
  ParamBox domain_;
  ParamBox sample_box_;
  FdSteps steps_;
  bool fixed_steps_ = false;
  RVector grid_origin_;  // samples snap to grid nodes when set
  double grid_spacing_ = 0.0;
  std::map<std::string, double> params_;
};

}  // namespace opgeom

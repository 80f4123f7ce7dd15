#include "opgeom/chart.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "opgeom/errors.hpp"

namespace opgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ParamBox box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  ParamBox b;
  b.lower = RVector::Map(lo.begin(), static_cast<Eigen::Index>(lo.size()));
  b.upper = RVector::Map(hi.begin(), static_cast<Eigen::Index>(hi.size()));
  return b;
}

std::string format_point(const RVector& u) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(u(i));
  }
  return s + ")";
}

}  // namespace

bool ParamBox::contains(const RVector& u) const {
  if (u.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u(i) > lower(i) && u(i) < upper(i))) return false;
  }
  return true;
}

Chart::Chart(std::string id, Map map, ParamBox domain, ParamBox sample_box, FdSteps steps)
    : id_(std::move(id)),
      map_(std::move(map)),
      domain_(std::move(domain)),
      sample_box_(std::move(sample_box)),
      steps_(steps) {
  if (domain_.lower.size() == 0 || domain_.lower.size() != domain_.upper.size()) {
    throw DomainError("chart domain must be a non-empty box");
  }
  if (!(steps_.first > 0.0 && steps_.second > 0.0 && steps_.outer > 0.0)) {
    throw DomainError("finite-difference steps must be positive");
  }
}

Chart Chart::flat_plane() {
  Chart c("flat_plane",
          [](const RVector& u) { return embed_diag(RVector{{u(0), u(1), 0.0}}); },
          box({-kInf, -kInf}, {kInf, kInf}), box({-1.0, -1.0}, {1.0, 1.0}));
  return c;
}

Chart Chart::sphere(double r, int dim) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  if (dim < 1) throw DomainError("sphere needs at least one angle");
  const auto d = static_cast<Eigen::Index>(dim);
  ParamBox domain, sample;
  domain.lower = RVector::Zero(d);
  domain.upper = RVector::Constant(d, std::numbers::pi);
  sample.lower = RVector::Constant(d, 0.3);
  sample.upper = RVector::Constant(d, std::numbers::pi - 0.3);
  domain.lower(d - 1) = -kInf;
  domain.upper(d - 1) = kInf;
  sample.lower(d - 1) = -std::numbers::pi;
  sample.upper(d - 1) = std::numbers::pi;

  Chart c(
      "sphere",
      [r, d](const RVector& u) {
        RVector x(d + 1);
        double s = r;
        for (Eigen::Index k = 0; k < d; ++k) {
          x(k) = s * std::cos(u(k));
          s *= std::sin(u(k));
        }
        x(d) = s;
        return embed_diag(x);
      },
      std::move(domain), std::move(sample));
  c.params_ = {{"r", r}, {"dim", static_cast<double>(dim)}};
  return c;
}

Chart Chart::torus(double major, double minor) {
  if (!(major > minor && minor > 0.0)) throw DomainError("torus needs R > r > 0");
  Chart c(
      "torus",
      [major, minor](const RVector& u) {
        const double ring = major + minor * std::cos(u(0));
        return embed_diag(RVector{{ring * std::cos(u(1)), ring * std::sin(u(1)),
                                   minor * std::sin(u(0))}});
      },
      box({-kInf, -kInf}, {kInf, kInf}),
      box({-std::numbers::pi, -std::numbers::pi}, {std::numbers::pi, std::numbers::pi}));
  c.params_ = {{"R", major}, {"r", minor}};
  return c;
}

Chart Chart::paraboloid(double a) {
  Chart c(
      "paraboloid",
      [a](const RVector& u) {
        return embed_diag(RVector{{u(0), u(1), a * (u(0) * u(0) + u(1) * u(1))}});
      },
      box({-kInf, -kInf}, {kInf, kInf}), box({-1.0, -1.0}, {1.0, 1.0}));
  c.params_ = {{"a", a}};
  return c;
}

Chart Chart::custom_grid(GridSamples grid) {
  const auto p = static_cast<Eigen::Index>(grid.shape.size());
  if (p == 0 || grid.origin.size() != p) throw DomainError("grid shape and origin disagree");
  if (!(grid.spacing > 0.0)) throw DomainError("grid spacing must be positive");
  Eigen::Index total = 1;
  for (auto n : grid.shape) {
    if (n < 3) throw DomainError("grid needs at least 3 nodes per axis");
    total *= n;
  }
  if (static_cast<Eigen::Index>(grid.values.size()) != total) {
    throw DomainError("grid has " + std::to_string(grid.values.size()) + " samples, expected " +
                      std::to_string(total));
  }
  for (const auto& v : grid.values) check_element(v);

  ParamBox domain, sample;
  domain.lower = grid.origin;
  domain.upper.resize(p);
  sample.lower.resize(p);
  sample.upper.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto n = static_cast<double>(grid.shape[static_cast<std::size_t>(k)]);
    domain.upper(k) = grid.origin(k) + (n - 1.0) * grid.spacing;
    // Interior nodes far enough from the edge for three nested stencils.
    sample.lower(k) = grid.origin(k) + 3.0 * grid.spacing;
    sample.upper(k) = domain.upper(k) - 3.0 * grid.spacing;
  }

  const double h = grid.spacing;
  RVector origin = grid.origin;
  auto data = std::make_shared<const GridSamples>(std::move(grid));
  Chart c(
      "custom_grid",
      [data](const RVector& u) {
        Eigen::Index flat = 0;
        for (std::size_t k = 0; k < data->shape.size(); ++k) {
          const auto kk = static_cast<Eigen::Index>(k);
          const double pos = (u(kk) - data->origin(kk)) / data->spacing;
          const double node = std::round(pos);
          if (std::abs(pos - node) > 1e-6) {
            throw EvaluationError("custom_grid chart evaluated off its grid nodes");
          }
          flat = flat * data->shape[k] + static_cast<Eigen::Index>(node);
        }
        return data->values[static_cast<std::size_t>(flat)];
      },
      std::move(domain), std::move(sample), FdSteps{h, h, h});
  c.fixed_steps_ = true;
  c.grid_origin_ = std::move(origin);
  c.grid_spacing_ = h;
  c.params_ = {{"spacing", h}};
  return c;
}

Chart Chart::with_steps(const FdSteps& steps) const {
  Chart c = *this;
  if (!fixed_steps_) {
    if (!(steps.first > 0.0 && steps.second > 0.0 && steps.outer > 0.0)) {
      throw DomainError("finite-difference steps must be positive");
    }
    c.steps_ = steps;
  }
  return c;
}

Element Chart::operator()(const RVector& u) const {
  if (!contains(u)) throw EvaluationError(id_ + " chart evaluated outside its domain at " + format_point(u));
  return map_(u);
}

RVector Chart::sample_point(Xorshift64Star& rng) const {
  RVector u(p());
  for (Eigen::Index k = 0; k < p(); ++k) {
    u(k) = rng.uniform(sample_box_.lower(k), sample_box_.upper(k));
    if (grid_spacing_ > 0.0) {
      u(k) = grid_origin_(k) + std::round((u(k) - grid_origin_(k)) / grid_spacing_) * grid_spacing_;
    }
  }
  return u;
}

}  // namespace opgeom

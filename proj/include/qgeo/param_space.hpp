#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgeo/errors.hpp"

namespace qgeo {

/// Coordinate chart of a time-parameter manifold. Index 0 is always time;
/// the remaining entries are the model's named parameters, in canonical
/// order.
class CoordinateSystem {
 public:
  /// names[0] must be "t"; all names must be distinct.
  explicit CoordinateSystem(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int idx) const;
  const std::vector<std::string>& names() const { return names_; }

  /// Throws UnknownParameter if the name is not part of this chart.
  int index_of(std::string_view name) const;
  bool has(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

using CoordsPtr = std::shared_ptr<const CoordinateSystem>;

/// A full coordinate Λ = (t, λ¹ … λᴺ) on the time-parameter manifold.
struct ParameterPoint {
  CoordsPtr chart;
  std::vector<double> values;

  double t() const { return values[0]; }
  int dim() const { return static_cast<int>(values.size()); }
  double operator[](int idx) const { return values[static_cast<size_t>(idx)]; }
  double at(std::string_view name) const;

  ParameterPoint displaced(int idx, double delta) const;
  ParameterPoint with(int idx, double value) const;
};

/// Ordered subset of Λ-indices selecting a submanifold.
struct CoordinateSet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  int operator[](int k) const { return indices[static_cast<size_t>(k)]; }

  /// All indices 0 … dim-1 of the chart.
  static CoordinateSet all(const CoordinateSystem& chart);
  /// By name; validates and rejects repeats.
  static CoordinateSet of(const CoordinateSystem& chart,
                          const std::vector<std::string>& names);
  void validate(const CoordinateSystem& chart) const;
  std::vector<std::string> labels(const CoordinateSystem& chart) const;
};

/// One swept parameter of a Cartesian grid.
struct SweepRange {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

/// Cartesian product grid, row-major in the declared range order (the first
/// declared range varies slowest). Every chart coordinate must be assigned
/// exactly once, either by a range or by a fixed value.
std::vector<ParameterPoint> make_grid(
    const CoordsPtr& chart, const std::vector<SweepRange>& ranges,
    const std::vector<std::pair<std::string, double>>& fixed);

enum class Stencil { central2, central4 };

struct DiffConfig {
  Stencil scheme = Stencil::central2;
  /// 0 selects the default for the derivative order: eps^(1/3) for first
  /// derivatives, eps^(1/4) for second derivatives.
  double base_step = 0.0;
  /// Scale the step by max(1, |Λ^idx|).
  bool relative_step = true;

  static DiffConfig fourth(double step = 1e-3) {
    return DiffConfig{Stencil::central4, step, true};
  }
};

struct DerivResult {
  double value = 0.0;
  /// True when the stencil crossed a validity boundary and a one-sided
  /// 2nd-order fallback was used instead.
  bool degraded = false;
};

using PointFn = std::function<double(const ParameterPoint&)>;

/// Central-difference estimate of ∂f/∂Λ^idx. Stencils that would leave the
/// model's validity domain (signalled by f throwing DomainError) fall back
/// to one-sided differences; if no evaluable stencil exists the DomainError
/// propagates.
DerivResult partial(const PointFn& f, const ParameterPoint& p, int idx,
                    const DiffConfig& cfg = {});

/// Mixed central difference, symmetric in (idx1, idx2) by construction.
DerivResult second_partial(const PointFn& f, const ParameterPoint& p, int idx1,
                           int idx2, const DiffConfig& cfg = {});

}  // namespace qgeo

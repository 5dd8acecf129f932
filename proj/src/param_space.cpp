#include "qgeo/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qgeo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double default_step(int order) {
  // Truncation/rounding balance for 2nd-order central differences.
  return order == 1 ? std::cbrt(kEps) : std::pow(kEps, 0.25);
}

double step_for(const DiffConfig& cfg, const ParameterPoint& p, int idx,
                int order) {
  double h = cfg.base_step > 0 ? cfg.base_step : default_step(order);
  if (cfg.relative_step) h *= std::max(1.0, std::abs(p[idx]));
  return h;
}

}  // namespace

CoordinateSystem::CoordinateSystem(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty() || names_[0] != "t")
    throw DomainError("coordinate chart must start with 't'");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second)
      throw DomainError("duplicate coordinate name '" + n + "'");
}

const std::string& CoordinateSystem::name(int idx) const {
  if (idx < 0 || idx >= size())
    throw UnknownParameter("coordinate index " + std::to_string(idx) +
                           " out of range");
  return names_[static_cast<size_t>(idx)];
}

int CoordinateSystem::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[static_cast<size_t>(i)] == name) return i;
  throw UnknownParameter("unknown parameter '" + std::string(name) + "'");
}

bool CoordinateSystem::has(std::string_view name) const {
  return std::any_of(names_.begin(), names_.end(),
                     [&](const std::string& n) { return n == name; });
}

double ParameterPoint::at(std::string_view name) const {
  return values[static_cast<size_t>(chart->index_of(name))];
}

ParameterPoint ParameterPoint::displaced(int idx, double delta) const {
  ParameterPoint q = *this;
  q.values[static_cast<size_t>(idx)] += delta;
  return q;
}

ParameterPoint ParameterPoint::with(int idx, double value) const {
  ParameterPoint q = *this;
  q.values[static_cast<size_t>(idx)] = value;
  return q;
}

CoordinateSet CoordinateSet::all(const CoordinateSystem& chart) {
  CoordinateSet cs;
  cs.indices.resize(static_cast<size_t>(chart.size()));
  for (int i = 0; i < chart.size(); ++i) cs.indices[static_cast<size_t>(i)] = i;
  return cs;
}

CoordinateSet CoordinateSet::of(const CoordinateSystem& chart,
                                const std::vector<std::string>& names) {
  CoordinateSet cs;
  for (const auto& n : names) cs.indices.push_back(chart.index_of(n));
  cs.validate(chart);
  return cs;
}

void CoordinateSet::validate(const CoordinateSystem& chart) const {
  std::set<int> seen;
  for (int idx : indices) {
    if (idx < 0 || idx >= chart.size())
      throw UnknownParameter("coordinate index " + std::to_string(idx) +
                             " out of range");
    if (!seen.insert(idx).second)
      throw DomainError("repeated coordinate index " + std::to_string(idx));
  }
}

std::vector<std::string> CoordinateSet::labels(
    const CoordinateSystem& chart) const {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (int idx : indices) out.push_back(chart.name(idx));
  return out;
}

std::vector<ParameterPoint> make_grid(
    const CoordsPtr& chart, const std::vector<SweepRange>& ranges,
    const std::vector<std::pair<std::string, double>>& fixed) {
  std::set<std::string> assigned;
  ParameterPoint base{chart, std::vector<double>(
                                 static_cast<size_t>(chart->size()), 0.0)};

  for (const auto& [name, value] : fixed) {
    if (!std::isfinite(value))
      throw DomainError("non-finite value for fixed parameter '" + name + "'");
    int idx = chart->index_of(name);
    if (!assigned.insert(name).second)
      throw DomainError("parameter '" + name + "' assigned more than once");
    base.values[static_cast<size_t>(idx)] = value;
  }

  std::vector<int> axis_index;
  for (const auto& r : ranges) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
      throw DomainError("non-finite bound for swept parameter '" + r.name +
                        "'");
    if (r.count < 1)
      throw DomainError("sweep count for '" + r.name + "' must be >= 1");
    if (r.lo > r.hi)
      throw DomainError("sweep range for '" + r.name + "' has lo > hi");
    axis_index.push_back(chart->index_of(r.name));
    if (!assigned.insert(r.name).second)
      throw DomainError("parameter '" + r.name + "' assigned more than once");
  }

  for (const auto& n : chart->names())
    if (!assigned.count(n))
      throw DomainError("parameter '" + n + "' missing from sweep");

  size_t total = 1;
  for (const auto& r : ranges) total *= static_cast<size_t>(r.count);

  std::vector<ParameterPoint> out;
  out.reserve(total);
  for (size_t flat = 0; flat < total; ++flat) {
    ParameterPoint p = base;
    size_t rem = flat;
    // Row-major: the first declared range varies slowest.
    for (size_t k = ranges.size(); k-- > 0;) {
      const auto& r = ranges[k];
      size_t i = rem % static_cast<size_t>(r.count);
      rem /= static_cast<size_t>(r.count);
      double v = r.count == 1
                     ? r.lo
                     : r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                                  static_cast<double>(r.count - 1);
      p.values[static_cast<size_t>(axis_index[k])] = v;
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Evaluates f at p displaced by delta along idx; domain violations are
// reported through `ok` instead of escaping.
double try_eval(const PointFn& f, const ParameterPoint& p, int idx,
                double delta, bool& ok) {
  try {
    double v = f(p.displaced(idx, delta));
    ok = ok && std::isfinite(v);
    return v;
  } catch (const DomainError&) {
    ok = false;
    return 0.0;
  }
}

DerivResult one_sided_first(const PointFn& f, const ParameterPoint& p, int idx,
                            double h) {
  for (double sign : {+1.0, -1.0}) {
    bool ok = true;
    double f0 = try_eval(f, p, idx, 0.0, ok);
    double f1 = try_eval(f, p, idx, sign * h, ok);
    double f2 = try_eval(f, p, idx, sign * 2 * h, ok);
    if (ok)
      return {sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h), true};
  }
  throw DomainError("no evaluable stencil for partial derivative along '" +
                    p.chart->name(idx) + "'");
}

}  // namespace

DerivResult partial(const PointFn& f, const ParameterPoint& p, int idx,
                    const DiffConfig& cfg) {
  const double h = step_for(cfg, p, idx, 1);
  bool ok = true;
  if (cfg.scheme == Stencil::central2) {
    double fp = try_eval(f, p, idx, +h, ok);
    double fm = try_eval(f, p, idx, -h, ok);
    if (ok) return {(fp - fm) / (2.0 * h), false};
  } else {
    double f2p = try_eval(f, p, idx, +2 * h, ok);
    double fp = try_eval(f, p, idx, +h, ok);
    double fm = try_eval(f, p, idx, -h, ok);
    double f2m = try_eval(f, p, idx, -2 * h, ok);
    if (ok) return {(-f2p + 8.0 * fp - 8.0 * fm + f2m) / (12.0 * h), false};
  }
  return one_sided_first(f, p, idx, h);
}

namespace {

DerivResult second_diag(const PointFn& f, const ParameterPoint& p, int idx,
                        const DiffConfig& cfg) {
  const double h = step_for(cfg, p, idx, 2);
  bool ok = true;
  double f0 = try_eval(f, p, idx, 0.0, ok);
  if (cfg.scheme == Stencil::central2) {
    double fp = try_eval(f, p, idx, +h, ok);
    double fm = try_eval(f, p, idx, -h, ok);
    if (ok) return {(fp - 2.0 * f0 + fm) / (h * h), false};
  } else {
    double f2p = try_eval(f, p, idx, +2 * h, ok);
    double fp = try_eval(f, p, idx, +h, ok);
    double fm = try_eval(f, p, idx, -h, ok);
    double f2m = try_eval(f, p, idx, -2 * h, ok);
    if (ok)
      return {(-f2p + 16.0 * fp - 30.0 * f0 + 16.0 * fm - f2m) / (12.0 * h * h),
              false};
  }
  // One-sided 2nd-order second difference.
  for (double sign : {+1.0, -1.0}) {
    bool side_ok = true;
    double g0 = try_eval(f, p, idx, 0.0, side_ok);
    double g1 = try_eval(f, p, idx, sign * h, side_ok);
    double g2 = try_eval(f, p, idx, sign * 2 * h, side_ok);
    double g3 = try_eval(f, p, idx, sign * 3 * h, side_ok);
    if (side_ok)
      return {(2.0 * g0 - 5.0 * g1 + 4.0 * g2 - g3) / (h * h), true};
  }
  throw DomainError("no evaluable stencil for second partial along '" +
                    p.chart->name(idx) + "'");
}

}  // namespace

DerivResult second_partial(const PointFn& f, const ParameterPoint& p, int idx1,
                           int idx2, const DiffConfig& cfg) {
  if (idx1 == idx2) return second_diag(f, p, idx1, cfg);
  // Canonical ordering keeps the stencil literally identical under swap.
  const int i = std::min(idx1, idx2);
  const int j = std::max(idx1, idx2);
  const double hi = step_for(cfg, p, i, 2);
  const double hj = step_for(cfg, p, j, 2);

  auto cross = [&](double si, double sj, bool& ok) {
    try {
      double v = f(p.displaced(i, si).displaced(j, sj));
      ok = ok && std::isfinite(v);
      return v;
    } catch (const DomainError&) {
      ok = false;
      return 0.0;
    }
  };

  auto cross_estimate = [&](double ai, double aj, bool& ok) {
    double fpp = cross(+ai, +aj, ok);
    double fpm = cross(+ai, -aj, ok);
    double fmp = cross(-ai, +aj, ok);
    double fmm = cross(-ai, -aj, ok);
    return (fpp - fpm - fmp + fmm) / (4.0 * ai * aj);
  };

  bool ok = true;
  double d_h = cross_estimate(hi, hj, ok);
  if (ok && cfg.scheme == Stencil::central4) {
    bool ok2 = true;
    double d_h2 = cross_estimate(hi / 2, hj / 2, ok2);
    if (ok2) return {(16.0 * d_h2 - d_h) / 15.0, false};
  }
  if (ok) return {d_h, false};

  // Fallback: nested one-sided-capable first differences.
  PointFn inner = [&](const ParameterPoint& q) {
    return partial(f, q, j, cfg).value;
  };
  DerivResult outer = partial(inner, p, i, cfg);
  return {outer.value, true};
}

}  // namespace qgeo

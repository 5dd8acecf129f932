#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qgeo/param_space.hpp"

namespace qgeo {

struct ExtremumSample {
  double t = 0.0;
  double location = 0.0;
  bool is_max = false;
};

/// Per-time extremum locations of a tracked quantity along one search
/// coordinate. `samples` follows a single branch (strictly increasing t,
/// nearest-to-previous selection); when several stationary points share a
/// bracket (a local maximum flanked by minima) the others land in `extra`.
struct Trajectory {
  std::vector<ExtremumSample> samples;
  std::vector<ExtremumSample> extra;
  std::vector<double> no_extremum_t;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::string quantity;
};

/// Tracks extrema of `quantity` over the search coordinate within
/// [lo, hi], for each t in t_grid (the base point supplies the remaining
/// coordinates). Brackets are scanned on a coarse grid and refined by
/// golden section to `tol` in the search coordinate. Flat or extremum-free
/// times are recorded in no_extremum_t, not fatal.
Trajectory track_extrema(const ParameterPoint& base, const PointFn& quantity,
                         const std::vector<double>& t_grid, int search_idx,
                         double lo, double hi, int scan_points = 41,
                         double tol = 1e-8);

enum class FitFamily { sin_damped, sinh_damped };

/// f(t) = c0 sin(c1 + c2 t) exp(-c3 t) + 1, or the sinh variant with the
/// same four-parameter shape.
double damped_model(FitFamily family, double c0, double c1, double c2,
                    double c3, double t);

struct FitResult {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  FitFamily family = FitFamily::sin_damped;
  double r_squared = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Damped Gauss-Newton (Levenberg-style regularization) least squares over
/// the trajectory samples, multi-started over the supplied frequency seeds
/// (use +-2 omega_b from the model's normal modes). Returns the best fit by
/// residual; converged = false after 500 iterations without meeting the
/// gradient tolerance.
FitResult fit_damped_trajectory(const Trajectory& traj, FitFamily family,
                                const std::vector<double>& freq_seeds);

struct NormalizedCurvature {
  std::vector<double> values;  // raw / (max - min); range exactly 1
  double raw_max = 0.0;
  double raw_min = 0.0;
};

/// Scale-normalized values over a sub-domain; throws
/// DegenerateNormalization when max == min.
NormalizedCurvature normalized_curvature(const std::vector<double>& raw);

}  // namespace qgeo

#include "qgeo/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qgeo {

namespace {

// Golden-section refinement of a bracketed minimum of f on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Trajectory track_extrema(const ParameterPoint& base, const PointFn& quantity,
                         const std::vector<double>& t_grid, int search_idx,
                         double lo, double hi, int scan_points, double tol) {
  if (!(hi > lo)) throw DomainError("track_extrema: empty bracket");
  if (scan_points < 5) throw DomainError("track_extrema: too few scan points");

  Trajectory traj;
  traj.bracket_lo = lo;
  traj.bracket_hi = hi;

  double previous = 0.5 * (lo + hi);
  bool have_previous = false;

  std::vector<double> xs(static_cast<size_t>(scan_points));
  for (int k = 0; k < scan_points; ++k)
    xs[static_cast<size_t>(k)] =
        lo + (hi - lo) * static_cast<double>(k) / (scan_points - 1);

  for (double t : t_grid) {
    const ParameterPoint pt = base.with(0, t);
    auto eval = [&](double x) { return quantity(pt.with(search_idx, x)); };

    std::vector<double> fs(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) fs[k] = eval(xs[k]);

    std::vector<ExtremumSample> found;
    for (size_t k = 1; k + 1 < xs.size(); ++k) {
      const bool is_min = fs[k] < fs[k - 1] && fs[k] < fs[k + 1];
      const bool is_max = fs[k] > fs[k - 1] && fs[k] > fs[k + 1];
      if (!is_min && !is_max) continue;
      auto signed_eval = [&](double x) {
        return is_max ? -eval(x) : eval(x);
      };
      const double x = golden_min(signed_eval, xs[k - 1], xs[k + 1], tol);
      found.push_back({t, x, is_max});
    }
    if (found.empty()) {
      traj.no_extremum_t.push_back(t);
      continue;
    }
    size_t pick = 0;
    const double target = have_previous ? previous : 0.5 * (lo + hi);
    for (size_t k = 1; k < found.size(); ++k)
      if (std::abs(found[k].location - target) <
          std::abs(found[pick].location - target))
        pick = k;
    traj.samples.push_back(found[pick]);
    previous = found[pick].location;
    have_previous = true;
    for (size_t k = 0; k < found.size(); ++k)
      if (k != pick) traj.extra.push_back(found[k]);
  }
  return traj;
}

double damped_model(FitFamily family, double c0, double c1, double c2,
                    double c3, double t) {
  const double phase = c1 + c2 * t;
  const double osc =
      family == FitFamily::sin_damped ? std::sin(phase) : std::sinh(phase);
  return c0 * osc * std::exp(-c3 * t) + 1.0;
}

namespace {

struct FitData {
  std::vector<double> t, y;
};

double sum_sq_residual(const FitData& d, FitFamily fam,
                       const Eigen::Vector4d& c) {
  double ssr = 0.0;
  for (size_t i = 0; i < d.t.size(); ++i) {
    const double r = damped_model(fam, c[0], c[1], c[2], c[3], d.t[i]) - d.y[i];
    ssr += r * r;
  }
  return ssr;
}

// Residuals and Jacobian of f(t;c) - y.
void residuals_jacobian(const FitData& d, FitFamily fam,
                        const Eigen::Vector4d& c, Eigen::VectorXd& r,
                        Eigen::MatrixXd& jac) {
  const auto m = static_cast<Eigen::Index>(d.t.size());
  r.resize(m);
  jac.resize(m, 4);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = d.t[static_cast<size_t>(i)];
    const double phase = c[1] + c[2] * t;
    const double osc =
        fam == FitFamily::sin_damped ? std::sin(phase) : std::sinh(phase);
    const double dosc =
        fam == FitFamily::sin_damped ? std::cos(phase) : std::cosh(phase);
    const double env = std::exp(-c[3] * t);
    r[i] = c[0] * osc * env + 1.0 - d.y[static_cast<size_t>(i)];
    jac(i, 0) = osc * env;
    jac(i, 1) = c[0] * dosc * env;
    jac(i, 2) = c[0] * dosc * t * env;
    jac(i, 3) = -c[0] * osc * t * env;
  }
}

// Linear amplitude/phase initialization at fixed (c2, c3).
Eigen::Vector4d linear_seed(const FitData& d, FitFamily fam, double c2,
                            double c3) {
  const auto m = static_cast<Eigen::Index>(d.t.size());
  Eigen::MatrixXd basis(m, 2);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = d.t[static_cast<size_t>(i)];
    const double env = std::exp(-c3 * t);
    if (fam == FitFamily::sin_damped) {
      basis(i, 0) = std::sin(c2 * t) * env;
      basis(i, 1) = std::cos(c2 * t) * env;
    } else {
      basis(i, 0) = std::cosh(c2 * t) * env;
      basis(i, 1) = std::sinh(c2 * t) * env;
    }
    rhs[i] = d.y[static_cast<size_t>(i)] - 1.0;
  }
  const Eigen::Vector2d ab =
      basis.colPivHouseholderQr().solve(rhs);

  double c0, c1;
  if (fam == FitFamily::sin_damped) {
    // a sin + b cos = c0 sin(c1 + c2 t) with a = c0 cos c1, b = c0 sin c1.
    c0 = std::hypot(ab[0], ab[1]);
    c1 = std::atan2(ab[1], ab[0]);
  } else {
    // a cosh + b sinh = c0 sinh(c1 + c2 t) with a = c0 sinh c1, b = c0 cosh c1.
    const double a = ab[0], b = ab[1];
    if (b * b > a * a) {
      c0 = (b > 0 ? 1.0 : -1.0) * std::sqrt(b * b - a * a);
      c1 = std::asinh(a / c0);
    } else {
      c0 = b != 0.0 ? b : 1e-3;
      c1 = 0.0;
    }
  }
  if (c0 == 0.0) c0 = 1e-6;
  return {c0, c1, c2, c3};
}

struct LmOutcome {
  Eigen::Vector4d c;
  double ssr = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

LmOutcome levenberg_marquardt(const FitData& d, FitFamily fam,
                              Eigen::Vector4d c) {
  LmOutcome out;
  double lambda = 1e-3;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals_jacobian(d, fam, c, r, jac);
  double ssr = r.squaredNorm();

  constexpr int kMaxIter = 500;
  int it = 0;
  for (; it < kMaxIter; ++it) {
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d jtr = jac.transpose() * r;
    if (jtr.cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, std::sqrt(ssr))) {
      out.converged = true;
      break;
    }
    Eigen::Matrix4d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
    const Eigen::Vector4d step = damped.ldlt().solve(-jtr);
    const Eigen::Vector4d trial = c + step;
    const double trial_ssr = sum_sq_residual(d, fam, trial);
    if (trial_ssr < ssr) {
      c = trial;
      ssr = trial_ssr;
      lambda = std::max(lambda * 0.3, 1e-12);
      residuals_jacobian(d, fam, c, r, jac);
      if (step.cwiseAbs().maxCoeff() < 1e-14) {
        out.converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  out.c = c;
  out.ssr = ssr;
  out.iterations = it;
  return out;
}

}  // namespace

FitResult fit_damped_trajectory(const Trajectory& traj, FitFamily family,
                                const std::vector<double>& freq_seeds) {
  if (traj.samples.size() < 8)
    throw DomainError("fit_damped_trajectory: need at least 8 samples");

  FitData d;
  for (const auto& s : traj.samples) {
    d.t.push_back(s.t);
    d.y.push_back(s.location);
  }

  std::vector<double> seeds;
  for (double s : freq_seeds) {
    if (s == 0.0) continue;
    seeds.push_back(s);
    seeds.push_back(-s);
  }
  if (seeds.empty()) seeds = {1.0, -1.0};

  LmOutcome best;
  for (double c2 : seeds)
    for (double c3 : {0.0, 0.05, 0.2}) {
      const LmOutcome run =
          levenberg_marquardt(d, family, linear_seed(d, family, c2, c3));
      if (run.ssr < best.ssr) best = run;
    }

  double mean = 0.0;
  for (double y : d.y) mean += y;
  mean /= static_cast<double>(d.y.size());
  double sst = 0.0;
  for (double y : d.y) sst += (y - mean) * (y - mean);

  FitResult fit;
  fit.c0 = best.c[0];
  fit.c1 = best.c[1];
  fit.c2 = best.c[2];
  fit.c3 = best.c[3];
  fit.family = family;
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  fit.r_squared = sst > 0 ? 1.0 - best.ssr / sst : (best.ssr == 0 ? 1.0 : 0.0);
  return fit;
}

NormalizedCurvature normalized_curvature(const std::vector<double>& raw) {
  if (raw.size() < 2)
    throw DomainError("normalized_curvature: need at least 2 values");
  NormalizedCurvature out;
  out.raw_max = *std::max_element(raw.begin(), raw.end());
  out.raw_min = *std::min_element(raw.begin(), raw.end());
  const double span = out.raw_max - out.raw_min;
  if (span == 0.0)
    throw DegenerateNormalization(
        "normalized_curvature: max equals min over the window");
  out.values.reserve(raw.size());
  for (double v : raw) out.values.push_back(v / span);
  return out;
}

}  // namespace qgeo

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgeo/models.hpp"

namespace qgeo {

namespace {

constexpr double kPi = std::numbers::pi;

void check_ho(double X, double W, double B) {
  if (!(X > 0)) throw DomainError("ho: requires X > 0");
  if (!(W > 0)) throw DomainError("ho: requires W > 0");
  if (!(B > 0)) throw DomainError("ho: requires B > 0");
}

double ho_u(double w, double W, double B, double t) {
  const double s = std::sin(w * t), c = std::cos(w * t);
  return B * w / (W * (B * B * s * s + c * c));
}

double ho_du_dt(double w, double W, double B, double t) {
  const double s = std::sin(w * t), c = std::cos(w * t);
  const double d = B * B * s * s + c * c;
  return -B * w * w * (B * B - 1.0) * std::sin(2.0 * w * t) / (W * d * d);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0) == (fm <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FockExpansion fock_coefficients(const ParameterPoint& p, int n_max) {
  const double t = p.t(), X = p.at("X"), W = p.at("W"), B = p.at("B");
  check_ho(X, W, B);
  if (n_max < 0) throw DomainError("fock_coefficients: n_max must be >= 0");

  const double w = std::sqrt(X * W);
  const double z = (1.0 - B) / (1.0 + B);

  FockExpansion out;
  out.gamma_scale = std::sqrt(w / W);
  out.mu_exp = {1.0 + B, 0.0};  // 1 + (U(0) + iV(0)) / gamma^2 with V(0) = 0
  out.coefficients.resize(static_cast<size_t>(n_max) + 1);

  // Overlap of the t = 0 packet with the even levels:
  //   c_n = sqrt(2) B^{1/4} / sqrt(1+B) * sqrt((2n)!)/(2^n n!) * z^n,
  // evolved by e^{-i E_{2n} t}; the factorial ratio is built by recurrence.
  const double amp0 = std::sqrt(2.0) * std::pow(B, 0.25) / std::sqrt(1.0 + B);
  double mag = amp0;
  double norm = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double e_2n = (2.0 * n + 0.5) * w;
    out.coefficients[static_cast<size_t>(n)] =
        mag * std::exp(std::complex<double>(0.0, -e_2n * t));
    norm += mag * mag;
    mag *= z * std::sqrt((2.0 * n + 1.0) / (2.0 * n + 2.0));
  }
  out.raw_norm = norm;
  out.truncation_warning = norm < 0.999;
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& c : out.coefficients) c *= scale;
  return out;
}

DensityReport density_analysis(double X, double W, double B,
                               const std::vector<double>& q_grid,
                               const std::vector<double>& t_grid) {
  check_ho(X, W, B);
  if (t_grid.size() < 2)
    throw DomainError("density_analysis: t_grid needs at least 2 points");
  const double w = std::sqrt(X * W);

  DensityReport rep;
  auto du = [&](double t) { return ho_du_dt(w, W, B, t); };
  auto rho0 = [&](double t) { return std::sqrt(ho_u(w, W, B, t) / kPi); };

  const bool stationary = std::abs(B - 1.0) < 1e-12;
  std::vector<double> roots;
  if (stationary) {
    // The density is constant in time; the critical lattice is recovered as
    // the B -> 1 limit.
    const double step = kPi / (2.0 * w);
    for (double ts = std::ceil(t_grid.front() / step - 1e-9) * step;
         ts <= t_grid.back() + 1e-12; ts += step)
      if (ts >= t_grid.front() - 1e-12) roots.push_back(std::max(ts, 0.0));
  } else {
    double dmax = 0.0;
    for (double t : t_grid) dmax = std::max(dmax, std::abs(du(t)));
    if (std::abs(du(t_grid.front())) < 1e-12 * std::max(1.0, dmax))
      roots.push_back(t_grid.front());
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
      const double a = du(t_grid[i]), b = du(t_grid[i + 1]);
      if ((a <= 0 && b > 0) || (a >= 0 && b < 0))
        roots.push_back(bisect(du, t_grid[i], t_grid[i + 1]));
    }
    if (std::abs(du(t_grid.back())) < 1e-12 * std::max(1.0, dmax))
      roots.push_back(t_grid.back());
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return b - a < 1e-9; }),
                roots.end());
  }

  const double h = 1e-5 / w;
  for (double ts : roots) {
    rep.critical_times.push_back(ts);
    rep.peak_values.push_back(rho0(ts));
    const double second =
        rho0(std::max(ts - h, 0.0)) - 2.0 * rho0(ts) + rho0(ts + h);
    rep.kinds.push_back(second < 0 ? DensityReport::Kind::maximum
                                   : DensityReport::Kind::minimum);
  }

  if (!stationary) {
    auto gap = [&](double t) {
      return ho_u(w, W, B, t) - ho_u(w, W, 1.0 / B, t);
    };
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
      const double a = gap(t_grid[i]), b = gap(t_grid[i + 1]);
      if ((a < 0 && b >= 0) || (a > 0 && b <= 0))
        rep.crossing_times.push_back(bisect(gap, t_grid[i], t_grid[i + 1]));
    }
    for (double tau : rep.crossing_times) {
      const double u1 = ho_u(w, W, B, tau), u2 = ho_u(w, W, 1.0 / B, tau);
      for (double q : q_grid) {
        const double r1 = std::sqrt(u1 / kPi) * std::exp(-u1 * q * q);
        const double r2 = std::sqrt(u2 / kPi) * std::exp(-u2 * q * q);
        rep.max_crossing_gap = std::max(rep.max_crossing_gap, std::abs(r1 - r2));
      }
    }
  }
  return rep;
}

}  // namespace qgeo

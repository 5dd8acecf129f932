#include <cmath>

#include "qgeo/models.hpp"

namespace qgeo {

namespace {

void check_point(const ParameterPoint& p) {
  if (!(p.at("omega0") > 0))
    throw DomainError("hotdf: requires omega0 > 0");
  if (!(hotdf_frequency_sq(p) > 0))
    throw DomainError(
        "hotdf: frequency positivity omega0^2 e^{2At} - A^2/4 > 0 violated");
}

}  // namespace

double hotdf_frequency_sq(const ParameterPoint& p) {
  const double A = p.at("A"), w0 = p.at("omega0");
  return w0 * w0 * std::exp(2.0 * A * p.t()) - A * A / 4.0;
}

double hotdf_gamma(const ParameterPoint& p) {
  return std::exp(-p.at("A") * p.t() / 2.0) / std::sqrt(p.at("omega0"));
}

HotdfTensors hotdf_closed_forms(const ParameterPoint& p, int n) {
  if (n < 0) throw DomainError("hotdf: level n must be >= 0");
  check_point(p);
  const double t = p.t(), A = p.at("A"), w0 = p.at("omega0");
  const double k = static_cast<double>(n) * n + n + 1;
  const double eA = std::exp(-A * t);

  HotdfTensors out;
  out.g << A * A, A * t, A / w0,
      A * t, eA * eA / (4.0 * w0 * w0) + t * t, t / w0,
      A / w0, t / w0, 1.0 / (w0 * w0);
  out.g *= k / 8.0;

  out.F << 0.0, A * w0, 0.0,
      -A * w0, 0.0, -1.0,
      0.0, 1.0, 0.0;
  out.F *= (2.0 * n + 1.0) * eA / (8.0 * w0 * w0);
  return out;
}

double ermakov_residual(const ParameterPoint& p, const GammaFn& gamma,
                        const DiffConfig& cfg) {
  const double g = gamma(p);
  const double gdd = second_partial(gamma, p, 0, 0, cfg).value;
  return gdd + hotdf_frequency_sq(p) * g - 1.0 / (g * g * g);
}

HotdfTensors hotdf_from_gamma(const ParameterPoint& p, int n,
                              const GammaFn& gamma, const DiffConfig& cfg) {
  if (n < 0) throw DomainError("hotdf: level n must be >= 0");
  check_point(p);
  const double res = ermakov_residual(p, gamma, cfg);
  if (std::abs(res) > 1e-6)
    throw DomainError("hotdf: supplied width function fails the Ermakov "
                      "equation (residual " + std::to_string(res) + ")");

  // phi = d/dt log gamma, evaluated as a field so it can be differenced.
  PointFn phi = [&](const ParameterPoint& q) {
    return partial(gamma, q, 0, cfg).value / gamma(q);
  };
  PointFn inv_sq = [&](const ParameterPoint& q) {
    const double g = gamma(q);
    return 1.0 / (g * g);
  };

  const int dim = 3;
  Eigen::Vector3d w, y;
  for (int i = 0; i < dim; ++i) {
    w[i] = partial(phi, p, i, cfg).value;
    y[i] = partial(inv_sq, p, i, cfg).value;
  }

  const double g4 = std::pow(gamma(p), 4);
  const double k = static_cast<double>(n) * n + n + 1;
  HotdfTensors out;
  out.g = g4 * k / 8.0 * (w * w.transpose() + y * y.transpose());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out.F(i, j) = g4 * (2.0 * n + 1.0) / 4.0 * (y[j] * w[i] - y[i] * w[j]);
  return out;
}

}  // namespace qgeo

#include "qgeo/geometry.hpp"

#include <cmath>

namespace qgeo {

namespace {

constexpr double kDegeneracyTol = 1e-10;

bool relative_degenerate(const Eigen::MatrixXd& g, double det) {
  // Diagonal entries set the scale; metric magnitudes vary over many orders
  // across the sweeps, so an absolute determinant threshold is useless.
  double log_scale = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    log_scale += std::log(std::max(std::abs(g(i, i)), 1e-300));
  return std::abs(det) < kDegeneracyTol * std::exp(log_scale);
}

}  // namespace

Submetric submetric(const ModelPtr& model, const ParameterPoint& p,
                    const CoordinateSet& coords) {
  const QGTResult q = tqgt(model, p, coords);
  Submetric out;
  out.coords = coords;
  out.labels = q.labels;
  out.values = q.g;
  out.det = q.g.determinant();
  out.degenerate = relative_degenerate(q.g, out.det);
  return out;
}

double palumbo_residual(const ModelPtr& model, const ParameterPoint& p,
                        int i1, int i2) {
  if (model->type() == ModelType::chain)
    throw DomainError(
        "palumbo_residual: defined for single-mode families and the "
        "time-dependent-frequency oscillator only");
  CoordinateSet pair;
  pair.indices = {i1, i2};
  const QGTResult q = tqgt(model, p, pair);
  const double det = q.g.determinant();
  const double f = q.F(0, 1);
  double factor = 0.25;
  if (model->type() == ModelType::hotdf) {
    const int n = std::static_pointer_cast<const HotdfFamily>(model)->level();
    const double k = static_cast<double>(n) * n + n + 1;
    factor = k * k / (4.0 * (2.0 * n + 1.0) * (2.0 * n + 1.0));
  }
  return det - factor * f * f;
}

MetricField model_metric_field(const ModelPtr& model,
                               const CoordinateSet& coords) {
  return [model, coords](const ParameterPoint& q) {
    return tqgt(model, q, coords).g;
  };
}

namespace {

struct FieldDiff {
  const MetricField& field;
  const CoordinateSet& coords;
  std::vector<double> h;  // per selected coordinate

  Eigen::MatrixXd operator()(const ParameterPoint& q) const { return field(q); }

  // d g / d coord_k at q, central.
  Eigen::MatrixXd dg(const ParameterPoint& q, int k) const {
    const ParameterPoint qp = q.displaced(coords[k], +h[static_cast<size_t>(k)]);
    const ParameterPoint qm = q.displaced(coords[k], -h[static_cast<size_t>(k)]);
    return (field(qp) - field(qm)) / (2.0 * h[static_cast<size_t>(k)]);
  }
};

Christoffels christoffel_at(const FieldDiff& fd, const ParameterPoint& q) {
  const int n = fd.coords.size();
  const Eigen::MatrixXd g = fd.field(q);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible())
    throw DegenerateMetric("christoffel: metric is singular at this point");
  const Eigen::MatrixXd ginv = lu.inverse();

  std::vector<Eigen::MatrixXd> dg(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) dg[static_cast<size_t>(k)] = fd.dg(q, k);

  Christoffels ch;
  ch.gamma.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += ginv(k, l) * (dg[static_cast<size_t>(i)](j, l) +
                               dg[static_cast<size_t>(j)](i, l) -
                               dg[static_cast<size_t>(l)](i, j));
        ch.gamma[static_cast<size_t>(k)](i, j) = 0.5 * sum;
        ch.gamma[static_cast<size_t>(k)](j, i) = 0.5 * sum;
      }
  return ch;
}

double scalar_curvature_step(const FieldDiff& fd, const ParameterPoint& p) {
  const int n = fd.coords.size();
  const Eigen::MatrixXd g = fd.field(p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible())
    throw DegenerateMetric("scalar_curvature: metric is singular");
  const Eigen::MatrixXd ginv = lu.inverse();

  const Christoffels ch0 = christoffel_at(fd, p);
  // dGamma[m][k](i,j) = d_m Gamma^k_{ij}
  std::vector<std::vector<Eigen::MatrixXd>> dG(
      static_cast<size_t>(n),
      std::vector<Eigen::MatrixXd>(static_cast<size_t>(n)));
  for (int m = 0; m < n; ++m) {
    const double hm = fd.h[static_cast<size_t>(m)];
    const Christoffels cp =
        christoffel_at(fd, p.displaced(fd.coords[m], +hm));
    const Christoffels cm =
        christoffel_at(fd, p.displaced(fd.coords[m], -hm));
    for (int k = 0; k < n; ++k)
      dG[static_cast<size_t>(m)][static_cast<size_t>(k)] =
          (cp.gamma[static_cast<size_t>(k)] - cm.gamma[static_cast<size_t>(k)]) /
          (2.0 * hm);
  }

  // Ricci_ij = d_k Gamma^k_ij - d_j Gamma^k_ik + Gamma^k_kl Gamma^l_ij
  //            - Gamma^k_jl Gamma^l_ik
  Eigen::MatrixXd ricci = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double r = 0.0;
      for (int k = 0; k < n; ++k) {
        r += dG[static_cast<size_t>(k)][static_cast<size_t>(k)](i, j);
        r -= dG[static_cast<size_t>(j)][static_cast<size_t>(k)](i, k);
        for (int l = 0; l < n; ++l) {
          r += ch0.gamma[static_cast<size_t>(k)](k, l) *
               ch0.gamma[static_cast<size_t>(l)](i, j);
          r -= ch0.gamma[static_cast<size_t>(k)](j, l) *
               ch0.gamma[static_cast<size_t>(l)](i, k);
        }
      }
      ricci(i, j) = r;
    }
  ricci = 0.5 * (ricci + ricci.transpose()).eval();
  return (ginv * ricci).trace();
}

FieldDiff make_diff(const MetricField& field, const CoordinateSet& coords,
                    const ParameterPoint& p, double step) {
  FieldDiff fd{field, coords, {}};
  fd.h.resize(static_cast<size_t>(coords.size()));
  for (int k = 0; k < coords.size(); ++k)
    fd.h[static_cast<size_t>(k)] = step * std::max(1.0, std::abs(p[coords[k]]));
  return fd;
}

}  // namespace

Christoffels christoffel(const MetricField& field, const ParameterPoint& p,
                         const CoordinateSet& coords, double step) {
  return christoffel_at(make_diff(field, coords, p, step), p);
}

CurvatureReport scalar_curvature_field(const MetricField& field,
                                       const ParameterPoint& p,
                                       const CoordinateSet& coords,
                                       const CurvatureOptions& opts) {
  CurvatureReport rep;
  rep.step_used = opts.step;
  const double coarse =
      scalar_curvature_step(make_diff(field, coords, p, opts.step), p);
  if (!opts.richardson) {
    rep.R = coarse;
    return rep;
  }
  const double fine =
      scalar_curvature_step(make_diff(field, coords, p, opts.step / 2), p);
  rep.R = (4.0 * fine - coarse) / 3.0;  // the differences are 2nd order
  rep.step_used = opts.step / 2;
  if (std::abs(fine - coarse) > 1e-3 * std::max(1.0, std::abs(rep.R))) {
    const double finer =
        scalar_curvature_step(make_diff(field, coords, p, opts.step / 4), p);
    rep.R = (4.0 * finer - fine) / 3.0;
    rep.step_used = opts.step / 4;
    rep.degraded =
        std::abs(finer - fine) > 1e-3 * std::max(1.0, std::abs(rep.R));
  }
  return rep;
}

CurvatureReport scalar_curvature(const ModelPtr& model,
                                 const ParameterPoint& p,
                                 const CoordinateSet& coords,
                                 const CurvatureOptions& opts) {
  const Submetric sub = submetric(model, p, coords);
  if (sub.degenerate)
    throw DegenerateMetric(
        "scalar_curvature: submetric over (" +
        [&] {
          std::string s;
          for (const auto& l : sub.labels) s += (s.empty() ? "" : ",") + l;
          return s;
        }() +
        ") is degenerate; curvature cannot be calculated");
  return scalar_curvature_field(model_metric_field(model, coords), p, coords,
                                opts);
}

}  // namespace qgeo

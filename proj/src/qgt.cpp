#include "qgeo/qgt.hpp"

#include <cmath>

namespace qgeo {

namespace {

using cplx = std::complex<double>;

void split_parts(QGTResult& r) {
  const int n = static_cast<int>(r.Q.rows());
  r.g.resize(n, n);
  r.F.resize(n, n);
  for (int i = 0; i < n; ++i) {
    r.g(i, i) = r.Q(i, i).real();
    r.F(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      r.g(i, j) = r.g(j, i) = r.Q(i, j).real();
      r.F(i, j) = -2.0 * r.Q(i, j).imag();
      r.F(j, i) = -r.F(i, j);
    }
  }
}

QGTResult from_hotdf_tensors(const HotdfTensors& full, const ModelPtr& model,
                             const ParameterPoint& p,
                             const CoordinateSet& coords) {
  QGTResult r;
  r.coords = coords;
  r.labels = coords.labels(model->chart());
  const int n = coords.size();
  r.Q.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.Q(i, j) = cplx(full.g(coords[i], coords[j]),
                       -0.5 * full.F(coords[i], coords[j]));
  r.singular = model->near_singular(p);
  split_parts(r);
  return r;
}

// Mode-sum assembly: Q_IJ = sum_a conj(d_I Omega_a) d_J Omega_a / (8 U_a^2).
QGTResult from_profile_partials(const ModelPtr& model, const ParameterPoint& p,
                                const CoordinateSet& coords,
                                const std::vector<double>& U,
                                const Eigen::MatrixXd& dU,
                                const Eigen::MatrixXd& dV) {
  QGTResult r;
  r.coords = coords;
  r.labels = coords.labels(model->chart());
  const int n = coords.size();
  r.Q = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < static_cast<int>(U.size()); ++a) {
    const double denom = 8.0 * U[static_cast<size_t>(a)] * U[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i) {
      const cplx di{dU(a, coords[i]), dV(a, coords[i])};
      for (int j = i; j < n; ++j) {
        const cplx dj{dU(a, coords[j]), dV(a, coords[j])};
        r.Q(i, j) += std::conj(di) * dj / denom;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) r.Q(i, j) = std::conj(r.Q(j, i));
  r.singular = model->near_singular(p);
  split_parts(r);
  return r;
}

}  // namespace

QGTResult tqgt(const ModelPtr& model, const ParameterPoint& p,
               const CoordinateSet& coords, QgtMode mode) {
  coords.validate(model->chart());
  if (model->type() == ModelType::hotdf) {
    const int n = std::static_pointer_cast<const HotdfFamily>(model)->level();
    const HotdfTensors full =
        mode == QgtMode::analytic
            ? hotdf_closed_forms(p, n)
            : hotdf_from_gamma(p, n, hotdf_gamma, DiffConfig::fourth());
    return from_hotdf_tensors(full, model, p, coords);
  }

  if (mode == QgtMode::analytic) {
    const ModeProfile prof = model->profile(p);
    return from_profile_partials(model, p, coords, prof.U, prof.dU, prof.dV);
  }

  // finite_diff: difference the profile fields, then run the same mode sum.
  const ModeProfile prof0 = model->profile(p);
  const int dim = model->chart().size();
  const int modes = prof0.modes();
  Eigen::MatrixXd dU(modes, dim), dV(modes, dim);
  const DiffConfig cfg = DiffConfig::fourth();
  for (int a = 0; a < modes; ++a) {
    for (int i = 0; i < dim; ++i) {
      dU(a, i) = partial([&](const ParameterPoint& q) {
                   return model->profile(q).U[static_cast<size_t>(a)];
                 }, p, i, cfg).value;
      dV(a, i) = partial([&](const ParameterPoint& q) {
                   return model->profile(q).V[static_cast<size_t>(a)];
                 }, p, i, cfg).value;
    }
  }
  return from_profile_partials(model, p, coords, prof0.U, dU, dV);
}

ConnectionVector berry_connection(const ModelPtr& model,
                                  const ParameterPoint& p) {
  const ModeProfile prof = model->profile(p);
  const int dim = model->chart().size();
  ConnectionVector out;
  out.gauge = "builtin closed-form normalization";
  out.A.resize(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    double a = -prof.dlog_c[static_cast<size_t>(i)].imag();
    for (int m = 0; m < prof.modes(); ++m)
      a += prof.dV(m, i) / (4.0 * prof.U[static_cast<size_t>(m)]);
    out.A[static_cast<size_t>(i)] = a;
  }
  return out;
}

std::complex<double> log_overlap_kernel(const ModelPtr& model,
                                        const ParameterPoint& p1,
                                        const ParameterPoint& p2,
                                        const PhaseFn& alpha) {
  cplx lo = log_overlap(model->profile(p1), model->profile(p2));
  if (alpha) lo += cplx(0.0, alpha(p2) - alpha(p1));
  return lo;
}

Eigen::MatrixXcd tqgt_from_overlaps(const ModelPtr& model,
                                    const ParameterPoint& p,
                                    const CoordinateSet& coords,
                                    const PhaseFn& alpha, double step) {
  coords.validate(model->chart());
  const int n = coords.size();

  // Q_IJ = d/dLambda1_I d/dLambda2_J log<Psi(L1)|Psi(L2)> at coincidence,
  // exact for normalized states; differenced with Richardson refinement.
  auto mixed = [&](int ci, int cj, double hi, double hj) {
    auto lo = [&](double si, double sj) {
      return log_overlap_kernel(model, p.displaced(ci, si),
                                p.displaced(cj, sj), alpha);
    };
    return (lo(+hi, +hj) - lo(+hi, -hj) - lo(-hi, +hj) + lo(-hi, -hj)) /
           (4.0 * hi * hj);
  };

  Eigen::MatrixXcd Q(n, n);
  for (int i = 0; i < n; ++i) {
    const double hi = step * std::max(1.0, std::abs(p[coords[i]]));
    for (int j = i; j < n; ++j) {
      const double hj = step * std::max(1.0, std::abs(p[coords[j]]));
      const cplx coarse = mixed(coords[i], coords[j], hi, hj);
      const cplx fine = mixed(coords[i], coords[j], hi / 2, hj / 2);
      Q(i, j) = (4.0 * fine - coarse) / 3.0;
      if (j > i) Q(j, i) = std::conj(Q(i, j));
    }
  }
  return Q;
}

GaugeReport gauge_check(const ModelPtr& model, const ParameterPoint& p,
                        const PhaseFn& alpha) {
  const CoordinateSet coords = CoordinateSet::all(model->chart());
  const Eigen::MatrixXcd q0 = tqgt_from_overlaps(model, p, coords, nullptr);
  const Eigen::MatrixXcd q1 = tqgt_from_overlaps(model, p, coords, alpha);

  GaugeReport rep;
  rep.max_abs_delta_q = (q1 - q0).cwiseAbs().maxCoeff();

  // Observed connection in either gauge via the discrete form
  // A_I = -Im log<Psi(p)|Psi(p + h e_I)>, centered.
  auto connection_obs = [&](const PhaseFn& phase, int idx) {
    const double h = 1e-4 * std::max(1.0, std::abs(p[idx]));
    const cplx fwd = log_overlap_kernel(model, p, p.displaced(idx, +h), phase);
    const cplx bwd = log_overlap_kernel(model, p, p.displaced(idx, -h), phase);
    return -(fwd.imag() - bwd.imag()) / (2.0 * h);
  };
  const int dim = model->chart().size();
  rep.delta_a.resize(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i)
    rep.delta_a[static_cast<size_t>(i)] =
        connection_obs(alpha, i) - connection_obs(nullptr, i);
  return rep;
}

double energy_dispersion(const ModelPtr& model, const ParameterPoint& p) {
  CoordinateSet time_only;
  time_only.indices = {0};
  return tqgt(model, p, time_only).Q(0, 0).real();
}

}  // namespace qgeo

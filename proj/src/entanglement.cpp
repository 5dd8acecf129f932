#include "qgeo/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qgeo {

namespace {

const ChainFamily& as_chain(const ModelPtr& model) {
  if (model->type() != ModelType::chain)
    throw DomainError("entanglement: the operation needs a chain model");
  return *std::static_pointer_cast<const ChainFamily>(model);
}

}  // namespace

CovarianceMatrix covariance_matrix(const ModelPtr& model,
                                   const ParameterPoint& p) {
  const ChainFamily& chain = as_chain(model);
  const NormalModeData nm = chain.normal_modes(p);
  const ModeProfile prof = chain.profile(p);
  const int n = chain.particles();

  Eigen::VectorXd u(n), uinv(n);
  for (int a = 0; a < n; ++a) {
    u[a] = prof.U[static_cast<size_t>(a)];
    uinv[a] = 1.0 / u[a];
  }

  CovarianceMatrix cov;
  cov.Y = p.at("Y");
  cov.region = nm.region;
  cov.D = nm.S * uinv.asDiagonal() * nm.S.transpose();
  cov.L = nm.S * u.asDiagonal() * nm.S.transpose();

  cov.sigma.resize(2 * n, 2 * n);
  cov.sigma.topLeftCorner(n, n) = 0.5 * cov.D;
  cov.sigma.topRightCorner(n, n) = -0.5 * cov.Y * cov.D;
  cov.sigma.bottomLeftCorner(n, n) = -0.5 * cov.Y * cov.D;
  cov.sigma.bottomRightCorner(n, n) = 0.5 * (cov.L + cov.Y * cov.Y * cov.D);
  return cov;
}

PurityResult purity(const ModelPtr& model, const ParameterPoint& p,
                    const std::vector<int>& subset) {
  const ChainFamily& chain = as_chain(model);
  const int n = chain.particles();
  const int k = static_cast<int>(subset.size());
  if (k < 1 || k > n)
    throw DomainError("purity: subset size must satisfy 1 <= k <= N");
  std::set<int> uniq(subset.begin(), subset.end());
  if (static_cast<int>(uniq.size()) != k)
    throw DomainError("purity: repeated particle index in subset");
  for (int a : subset)
    if (a < 0 || a >= n)
      throw DomainError("purity: particle index out of range");

  const CovarianceMatrix cov = covariance_matrix(model, p);

  // Reduced covariance: rows/columns of both blocks for the kept particles.
  Eigen::MatrixXd reduced(2 * k, 2 * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      const int a = subset[static_cast<size_t>(r)];
      const int b = subset[static_cast<size_t>(c)];
      reduced(r, c) = cov.sigma(a, b);
      reduced(r, k + c) = cov.sigma(a, n + b);
      reduced(k + r, c) = cov.sigma(n + a, b);
      reduced(k + r, k + c) = cov.sigma(n + a, n + b);
    }

  const double det = reduced.determinant();
  if (!(det > 0))
    throw Error("purity: non-positive reduced covariance determinant "
                "(internal inconsistency)");

  PurityResult out;
  out.mu = std::pow(2.0, -k) / std::sqrt(det);
  out.subset = subset;
  out.region = cov.region;
  out.t = p.t();
  return out;
}

double aitken_limit(std::vector<double> seq) {
  if (seq.empty()) throw DomainError("aitken_limit: empty sequence");
  while (seq.size() >= 3) {
    std::vector<double> next;
    for (size_t i = 0; i + 2 < seq.size(); ++i) {
      const double d1 = seq[i + 1] - seq[i];
      const double d2 = seq[i + 2] - seq[i + 1];
      const double denom = d2 - d1;
      next.push_back(std::abs(denom) < 1e-300
                         ? seq[i + 2]
                         : seq[i + 2] - d2 * d2 / denom);
    }
    seq = std::move(next);
  }
  return seq.back();
}

BifurcationScan bifurcation_scan(const ModelPtr& model,
                                 const std::vector<ParameterPoint>& path,
                                 const std::vector<int>& subset) {
  const ChainFamily& chain = as_chain(model);
  if (path.size() < 3)
    throw InvalidPath("bifurcation_scan: need at least 3 path points");

  BifurcationScan scan;
  std::vector<double> drive;  // squared frequency of the mode going critical
  for (const auto& p : path) {
    NormalModeData nm;
    try {
      nm = chain.normal_modes(p);
    } catch (const BifurcationBoundary&) {
      throw InvalidPath("bifurcation_scan: path touches the boundary");
    }
    if (scan.near_side.empty()) scan.near_region = nm.region;
    if (nm.region != scan.near_region)
      throw InvalidPath("bifurcation_scan: path crosses the boundary");
    int arg = 0;
    for (int b = 1; b < nm.omega_sq.size(); ++b)
      if (std::abs(nm.omega_sq[b]) < std::abs(nm.omega_sq[arg])) arg = b;
    drive.push_back(nm.omega_sq[arg]);
    scan.near_side.push_back(purity(model, p, subset));
  }
  for (size_t i = 0; i + 1 < drive.size(); ++i)
    if (std::abs(drive[i + 1]) >= std::abs(drive[i]))
      throw InvalidPath(
          "bifurcation_scan: path does not approach the boundary");

  // Mirror across the boundary: omega^2 enters every mode through X with
  // unit coefficient, so X -> X - 2 omega_drive^2 reflects the driving
  // eigenvalue exactly.
  const int x_idx = chain.chart().index_of("X");
  for (size_t i = 0; i < path.size(); ++i) {
    scan.far_path.push_back(
        path[i].displaced(x_idx, -2.0 * drive[i]));
  }
  scan.far_region = chain.normal_modes(scan.far_path.front()).region;
  for (const auto& p : scan.far_path) {
    if (chain.normal_modes(p).region != scan.far_region)
      throw InvalidPath("bifurcation_scan: mirrored path is inconsistent");
    scan.far_side.push_back(purity(model, p, subset));
  }

  std::vector<double> mu_near, mu_far;
  for (const auto& r : scan.near_side) mu_near.push_back(r.mu);
  for (const auto& r : scan.far_side) mu_far.push_back(r.mu);
  scan.near_limit = aitken_limit(mu_near);
  scan.far_limit = aitken_limit(mu_far);
  scan.continuous = std::abs(scan.near_limit - scan.far_limit) <= 1e-3;
  scan.zero_limit = std::abs(scan.near_limit) <= 1e-3 &&
                    std::abs(scan.far_limit) <= 1e-3;
  return scan;
}

}  // namespace qgeo

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qgeo/models.hpp"

namespace qgeo {

/// Position/momentum second moments of the chain state, ordering
/// (q_1..q_N, p_1..p_N), with the normal-frame blocks cached.
struct CovarianceMatrix {
  Eigen::MatrixXd sigma;  // 2N x 2N symmetric positive definite
  Eigen::MatrixXd D;      // S U^{-1} S^T
  Eigen::MatrixXd L;      // S U S^T
  double Y = 0.0;
  int region = 1;
};

CovarianceMatrix covariance_matrix(const ModelPtr& chain,
                                   const ParameterPoint& p);

struct PurityResult {
  double mu = 0.0;
  std::vector<int> subset;  // zero-based particle indices
  int region = 1;
  double t = 0.0;
};

/// mu = 2^-k / sqrt(det sigma^(k)) of the reduced state of the selected
/// particles; equals 1/sqrt(det L_k det D_k) through the block structure.
PurityResult purity(const ModelPtr& chain, const ParameterPoint& p,
                    const std::vector<int>& subset);

/// Purity along a one-sided path approaching a bifurcation boundary, plus
/// the mirrored path on the other side (the driving squared frequency is
/// reflected through zero by a shift of X). Limits are extrapolated, never
/// evaluated on the boundary itself.
struct BifurcationScan {
  std::vector<PurityResult> near_side;
  std::vector<PurityResult> far_side;
  std::vector<ParameterPoint> far_path;
  double near_limit = 0.0;
  double far_limit = 0.0;
  int near_region = 1;
  int far_region = 1;
  bool continuous = false;  // |near_limit - far_limit| <= 1e-3
  bool zero_limit = false;  // both limits within 1e-3 of zero
};

BifurcationScan bifurcation_scan(const ModelPtr& chain,
                                 const std::vector<ParameterPoint>& path,
                                 const std::vector<int>& subset);

/// Iterated Aitken extrapolation of a geometrically converging sequence.
double aitken_limit(std::vector<double> seq);

}  // namespace qgeo

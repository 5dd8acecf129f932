#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "qgeo/models.hpp"
#include "qgeo/qgt.hpp"

namespace qgeo {

struct Submetric {
  CoordinateSet coords;
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
  double det = 0.0;
  /// Relative test: |det| / (geometric mean of |diagonal|)^eta < 1e-10.
  bool degenerate = false;
};

Submetric submetric(const ModelPtr& model, const ParameterPoint& p,
                    const CoordinateSet& coords);

/// Signed residual of the determinant identity linking the 2x2 submetric to
/// the curvature component: det g - F^2/4 for the Gaussian oscillator
/// families, det g - (n^2+n+1)^2 F^2 / (4 (2n+1)^2) for the invariant states
/// of the time-dependent-frequency oscillator.
double palumbo_residual(const ModelPtr& model, const ParameterPoint& p,
                        int i1, int i2);

/// Any smooth symmetric-matrix field over the selected coordinates. Must be
/// safe to evaluate concurrently; scalar_curvature differences it.
using MetricField = std::function<Eigen::MatrixXd(const ParameterPoint&)>;

/// Adapts a model to a MetricField returning the submetric over coords.
MetricField model_metric_field(const ModelPtr& model,
                               const CoordinateSet& coords);

/// gamma[k](i,j) = Gamma^k_{ij}; symmetric in (i,j), exact on constant
/// metrics.
struct Christoffels {
  std::vector<Eigen::MatrixXd> gamma;
};

Christoffels christoffel(const MetricField& field, const ParameterPoint& p,
                         const CoordinateSet& coords, double step = 5e-3);

struct CurvatureOptions {
  double step = 5e-3;
  bool richardson = true;
};

struct CurvatureReport {
  double R = 0.0;
  double step_used = 0.0;
  /// Step-halving still moved the estimate by more than 1e-3 relative.
  bool degraded = false;
};

CurvatureReport scalar_curvature_field(const MetricField& field,
                                       const ParameterPoint& p,
                                       const CoordinateSet& coords,
                                       const CurvatureOptions& opts = {});

/// Scalar curvature of the model submetric over coords. Throws
/// DegenerateMetric when the submetric determinant vanishes there.
CurvatureReport scalar_curvature(const ModelPtr& model,
                                 const ParameterPoint& p,
                                 const CoordinateSet& coords,
                                 const CurvatureOptions& opts = {});

}  // namespace qgeo

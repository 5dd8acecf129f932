#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qgeo/models.hpp"
#include "qgeo/param_space.hpp"

namespace qgeo {

/// Hermitian geometric tensor over a coordinate subset, split into its
/// metric part g (symmetric) and curvature part F (antisymmetric).
struct QGTResult {
  CoordinateSet coords;
  std::vector<std::string> labels;
  Eigen::MatrixXcd Q;
  Eigen::MatrixXd g;  // Re Q, stored exactly symmetric
  Eigen::MatrixXd F;  // -2 Im Q, stored exactly antisymmetric, zero diagonal
  /// Set within 1e-8 of a harmonic/inverted bifurcation; values are still
  /// returned so divergence studies can use them.
  bool singular = false;
};

enum class QgtMode { analytic, finite_diff };

/// Assembles the tensor from the mode-sum over the profile's U, V partials
/// (analytic) or from differenced profiles (finite_diff). The
/// time-dependent-frequency family routes to its closed forms instead; its
/// finite_diff mode differences the built-in width function.
QGTResult tqgt(const ModelPtr& model, const ParameterPoint& p,
               const CoordinateSet& coords, QgtMode mode = QgtMode::analytic);

struct ConnectionVector {
  std::vector<double> A;
  /// Wavefunction representation the values are pinned to; the connection
  /// is gauge-dependent, unlike Q, g and F.
  std::string gauge;
};

/// A_I = -Im <Psi | d_I Psi> in the built-in closed-form representation.
ConnectionVector berry_connection(const ModelPtr& model,
                                  const ParameterPoint& p);

using PhaseFn = std::function<double(const ParameterPoint&)>;

struct GaugeReport {
  /// max |Q' - Q| over all components, both sides evaluated through the
  /// overlap kernel so the phase actually enters the computation.
  double max_abs_delta_q = 0.0;
  /// A'_I - A_I per coordinate; transforms as -d_I(alpha).
  std::vector<double> delta_a;
};

GaugeReport gauge_check(const ModelPtr& model, const ParameterPoint& p,
                        const PhaseFn& alpha);

/// Q_00 = (Delta E)^2; zero for stationary configurations.
double energy_dispersion(const ModelPtr& model, const ParameterPoint& p);

/// log <Psi(p1)|Psi(p2)> with an optional extra phase exp(i alpha); the
/// basis of the finite-difference overlap route.
std::complex<double> log_overlap_kernel(const ModelPtr& model,
                                        const ParameterPoint& p1,
                                        const ParameterPoint& p2,
                                        const PhaseFn& alpha = nullptr);

/// Tensor from second differences of the overlap kernel; exists so gauge
/// invariance can be tested against a route the phase flows through.
Eigen::MatrixXcd tqgt_from_overlaps(const ModelPtr& model,
                                    const ParameterPoint& p,
                                    const CoordinateSet& coords,
                                    const PhaseFn& alpha = nullptr,
                                    double step = 1e-3);

}  // namespace qgeo

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qgeo/param_space.hpp"

namespace qgeo {

enum class ModelType { ho, iho, hotdf, chain };
enum class Regime { harmonic, inverted };

/// Which state family to build, plus its structural data.
struct ModelKind {
  ModelType type = ModelType::ho;
  int level = 0;            // hotdf: Lewis level n >= 0
  Eigen::MatrixXd coupling; // chain: N x N symmetric A with distinct eigenvalues

  static ModelKind HO() { return {ModelType::ho, 0, {}}; }
  static ModelKind IHO() { return {ModelType::iho, 0, {}}; }
  static ModelKind Hotdf(int n) { return {ModelType::hotdf, n, {}}; }
  static ModelKind Chain(Eigen::MatrixXd a) {
    return {ModelType::chain, 0, std::move(a)};
  }
};

/// Per-mode Gaussian data of a state at one point: exponent functions U, V
/// (exponent = -(U + iV) Q^2 / 2 per normal mode), the aggregate complex
/// log-normalization, and analytic partials over the full chart.
struct ModeProfile {
  std::vector<double> U;  // > 0 per mode
  std::vector<double> V;
  Eigen::MatrixXd dU;     // mode x coordinate
  Eigen::MatrixXd dV;
  std::complex<double> log_c;  // continuous phase across t
  std::vector<std::complex<double>> dlog_c;

  int modes() const { return static_cast<int>(U.size()); }
  std::complex<double> omega(int a) const { return {U[a], V[a]}; }
};

/// Orthogonal normal-mode transform of a chain point.
struct NormalModeData {
  Eigen::MatrixXd S;          // columns = modes, sorted by omega^2 ascending
  Eigen::VectorXd omega_sq;   // may be negative
  Eigen::VectorXd freq;       // omega_b (harmonic) or alpha_b (inverted)
  std::vector<Regime> regimes;
  int region = 1;             // 1 + number of inverted modes
};

class StateFamily;
using ModelPtr = std::shared_ptr<const StateFamily>;

/// Immutable handle to one of the closed-form state families. Thread-safe:
/// all evaluation is const and free of shared mutable state.
class StateFamily {
 public:
  virtual ~StateFamily() = default;

  ModelType type() const { return type_; }
  const std::string& name() const { return name_; }
  const CoordinateSystem& chart() const { return *chart_; }
  CoordsPtr chart_ptr() const { return chart_; }
  int modes() const { return modes_; }

  /// Builds a point from named values; every chart coordinate must be
  /// present and no extras are allowed.
  ParameterPoint point(
      const std::vector<std::pair<std::string, double>>& values) const;

  /// Throws DomainError naming the violated constraint.
  virtual void validate(const ParameterPoint& p) const = 0;
  virtual ModeProfile profile(const ParameterPoint& p) const = 0;
  virtual double expected_energy(const ParameterPoint& p) const = 0;
  virtual int region(const ParameterPoint& p) const = 0;
  /// True within 1e-8 of a harmonic/inverted bifurcation; results there are
  /// flagged rather than rejected so divergence studies can approach it.
  virtual bool near_singular(const ParameterPoint& p) const = 0;

 protected:
  StateFamily(ModelType type, std::string name, CoordsPtr chart, int modes)
      : type_(type), name_(std::move(name)), chart_(std::move(chart)),
        modes_(modes) {}

  ModelType type_;
  std::string name_;
  CoordsPtr chart_;
  int modes_;
};

ModelPtr build_model(const ModelKind& kind);

class ChainFamily : public StateFamily {
 public:
  explicit ChainFamily(Eigen::MatrixXd coupling);

  int particles() const { return n_; }
  const Eigen::MatrixXd& coupling() const { return coupling_; }
  const Eigen::VectorXd& coupling_eigenvalues() const { return a_; }
  NormalModeData normal_modes(const ParameterPoint& p) const;
  /// Default functionally independent coordinate choice for curvature:
  /// (X, Y, B1..BN) for N = 2, (X, Y, Z, B1..BN) otherwise; validated by
  /// nondegeneracy at runtime.
  std::vector<std::string> default_curvature_coords() const;

  void validate(const ParameterPoint& p) const override;
  ModeProfile profile(const ParameterPoint& p) const override;
  double expected_energy(const ParameterPoint& p) const override;
  int region(const ParameterPoint& p) const override;
  bool near_singular(const ParameterPoint& p) const override;

 private:
  int n_;
  Eigen::MatrixXd coupling_;
  Eigen::VectorXd a_;   // eigenvalues of A, ascending
  Eigen::MatrixXd s0_;  // eigenvectors of A, sign-fixed
};

class HotdfFamily : public StateFamily {
 public:
  explicit HotdfFamily(int level);
  int level() const { return level_; }

  void validate(const ParameterPoint& p) const override;
  /// Gaussian view of the level-0 state (overlap/connection machinery);
  /// excited levels are not plain Gaussians and are rejected here.
  ModeProfile profile(const ParameterPoint& p) const override;
  double expected_energy(const ParameterPoint& p) const override;
  int region(const ParameterPoint&) const override { return 1; }
  bool near_singular(const ParameterPoint& p) const override;

 private:
  int level_;
};

/// Normal-mode decomposition of M = Z A + (X - Y^2) 1. Eigenvector signs are
/// fixed (first nonzero component positive) for reproducibility. Throws
/// BifurcationBoundary when any |omega_b^2| < 1e-12.
NormalModeData normal_mode_decomposition(const Eigen::MatrixXd& A, double X,
                                         double Y, double Z);

/// B values sharing a given mean energy. Harmonic regime returns both roots
/// (product 1); inverted returns only the normalizable positive root.
std::vector<double> b_solutions(double e_bar, double freq, Regime regime);

/// Extremal-B trajectories (B_+, B_-) of the time-bearing metric components;
/// both tend to 1 as the scaled time grows.
std::pair<double, double> extremal_b(double t, double freq, Regime regime);

/// log <Psi(p1)|Psi(p2)> of two profiles of the same family (closed-form
/// multimode Gaussian overlap; exact, no quadrature).
std::complex<double> log_overlap(const ModeProfile& a, const ModeProfile& b);

/// |<Psi(p1)|Psi(p2)>| in [0, 1]. Gaussian families only.
double fidelity_overlap(const ModelPtr& model, const ParameterPoint& p1,
                        const ParameterPoint& p2);

// --- Fock expansion and probability-density analysis (HO family) ---

struct FockExpansion {
  /// coefficients[n] multiplies the even level u_{2n}, phases included.
  std::vector<std::complex<double>> coefficients;
  std::complex<double> mu_exp;   // auxiliary 1 + (U(0) + iV(0)) / gamma^2
  double gamma_scale = 0.0;      // sqrt(omega / W)
  double raw_norm = 0.0;         // sum |c_n|^2 before renormalization
  bool truncation_warning = false;  // raw_norm < 0.999
};

FockExpansion fock_coefficients(const ParameterPoint& p, int n_max);

struct DensityReport {
  enum class Kind { minimum, maximum };
  std::vector<double> critical_times;  // t* = n pi / (2 omega)
  std::vector<Kind> kinds;
  std::vector<double> peak_values;     // rho(0, t*)
  std::vector<double> crossing_times;  // rho(.,.;B) vs rho(.,.;1/B)
  double max_crossing_gap = 0.0;       // max_q |rho_B - rho_{1/B}| at crossings
};

/// Critical-time structure of rho(0, t) for the oscillator packet, plus the
/// crossing times of the (B, 1/B) pair.
DensityReport density_analysis(double X, double W, double B,
                               const std::vector<double>& q_grid,
                               const std::vector<double>& t_grid);

// --- Time-dependent-frequency closed forms ---

struct HotdfTensors {
  Eigen::Matrix3d g;
  Eigen::Matrix3d F;
};

/// Metric and curvature of the level-n invariant state over (t, A, omega0).
HotdfTensors hotdf_closed_forms(const ParameterPoint& p, int n);

using GammaFn = std::function<double(const ParameterPoint&)>;

/// Same tensors from an arbitrary width function gamma(Lambda) solving the
/// Ermakov equation for this model's frequency; the solution property is
/// enforced through a residual check (tolerance 1e-6).
HotdfTensors hotdf_from_gamma(const ParameterPoint& p, int n,
                              const GammaFn& gamma,
                              const DiffConfig& cfg = DiffConfig::fourth());

/// gamma'' + omega^2(t) gamma - gamma^-3 at p, derivatives by differencing.
double ermakov_residual(const ParameterPoint& p, const GammaFn& gamma,
                        const DiffConfig& cfg = DiffConfig::fourth());

double hotdf_frequency_sq(const ParameterPoint& p);
/// Built-in Ermakov solution for the exponential frequency profile.
double hotdf_gamma(const ParameterPoint& p);

}  // namespace qgeo

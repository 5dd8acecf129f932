#include "qgeo/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qgeo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHyperbolicShiftAt = 20.0;  // switch to exponent-shifted forms
constexpr double kHyperbolicOverflowAt = 350.0;
constexpr double kBoundaryTol = 1e-12;   // bifurcation boundary on omega^2
constexpr double kSingularTol = 1e-8;    // near-singular flag threshold

using cplx = std::complex<double>;

[[noreturn]] void domain_fail(const std::string& model, const std::string& what) {
  throw DomainError(model + ": " + what);
}

/// One normal mode evaluated with unit mass: U, bare V (no Y shift), log of
/// the mode normalization zeta = cos + iB sin (or cosh + iB sinh), and
/// partials with respect to (frequency, B, t).
struct ModeEval {
  double U = 0, V = 0;
  double dU_dw = 0, dU_dB = 0, dU_dt = 0;
  double dV_dw = 0, dV_dB = 0, dV_dt = 0;
  cplx log_zeta{0, 0};
  cplx dlz_dw{0, 0}, dlz_dB{0, 0}, dlz_dt{0, 0};
};

// Continuous argument of zeta(theta) = cos(theta) + iB sin(theta); the curve
// winds once around the origin per 2*pi of theta.
double harmonic_arg(double theta, double B) {
  double base = std::atan2(B * std::sin(theta), std::cos(theta));
  return base + 2.0 * kPi * std::floor((theta + kPi) / (2.0 * kPi));
}

ModeEval eval_harmonic_mode(double w, double B, double t) {
  ModeEval m;
  const double theta = w * t;
  const double s = std::sin(theta), c = std::cos(theta);
  const double s2 = std::sin(2.0 * theta), c2 = std::cos(2.0 * theta);
  const double d = B * B * s * s + c * c;  // removable csc/cot singularities cancel

  m.U = B * w / d;
  m.V = -(B * B - 1.0) * w * s2 / (2.0 * d);

  const double U_theta = -B * w * (B * B - 1.0) * s2 / (d * d);
  m.dU_dt = w * U_theta;
  m.dU_dw = B / d + t * U_theta;
  m.dU_dB = w * (c * c - B * B * s * s) / (d * d);

  const double V_theta = -(B * B - 1.0) * w *
                         (2.0 * c2 * d - (B * B - 1.0) * s2 * s2) /
                         (2.0 * d * d);
  m.dV_dt = w * V_theta;
  m.dV_dw = -(B * B - 1.0) * s2 / (2.0 * d) + t * V_theta;
  m.dV_dB = -w * s2 * B / (d * d);

  m.log_zeta = cplx(0.5 * std::log(d), harmonic_arg(theta, B));
  const cplx dlz_dtheta = cplx((B * B - 1.0) * s2 / 2.0, B) / d;
  m.dlz_dt = w * dlz_dtheta;
  m.dlz_dw = t * dlz_dtheta;
  m.dlz_dB = cplx(B * s * s, s * c) / d;
  return m;
}

ModeEval eval_inverted_mode(double a, double B, double t) {
  ModeEval m;
  const double x = a * t;
  if (x > kHyperbolicOverflowAt)
    throw RangeOverflow("hyperbolic argument alpha*t = " + std::to_string(x) +
                        " exceeds the overflow guard (350)");

  if (x <= kHyperbolicShiftAt) {
    const double sh = std::sinh(x), ch = std::cosh(x);
    const double s2h = std::sinh(2.0 * x), c2h = std::cosh(2.0 * x);
    const double d = B * B * sh * sh + ch * ch;

    m.U = B * a / d;
    m.V = -(B * B + 1.0) * a * s2h / (2.0 * d);

    const double U_x = -B * a * (B * B + 1.0) * s2h / (d * d);
    m.dU_dt = a * U_x;
    m.dU_dw = B / d + t * U_x;
    m.dU_dB = a * (ch * ch - B * B * sh * sh) / (d * d);

    const double V_x = -(B * B + 1.0) * a *
                       (2.0 * c2h * d - (B * B + 1.0) * s2h * s2h) /
                       (2.0 * d * d);
    m.dV_dt = a * V_x;
    m.dV_dw = -(B * B + 1.0) * s2h / (2.0 * d) + t * V_x;
    m.dV_dB = -a * s2h * B / (d * d);

    m.log_zeta = cplx(0.5 * std::log(d), std::atan2(B * sh, ch));
    const cplx dlz_dx = cplx((1.0 + B * B) * s2h / 2.0, B) / d;
    m.dlz_dt = a * dlz_dx;
    m.dlz_dw = t * dlz_dx;
    m.dlz_dB = cplx(B * sh * sh, s2h / 2.0) / d;
    return m;
  }

  // Exponent-shifted forms: d = e^{2x} ds with ds O(1), avoiding cosh overflow.
  const double e2 = std::exp(-2.0 * x);
  const double e4 = e2 * e2;
  const double ds = (B * B + 1.0) * (1.0 + e4) / 4.0 + (1.0 - B * B) * e2 / 2.0;

  m.U = B * a * e2 / ds;
  m.V = -(B * B + 1.0) * a * (1.0 - e4) / (4.0 * ds);

  const double U_x = -B * a * (B * B + 1.0) * (1.0 - e4) * e2 / (2.0 * ds * ds);
  m.dU_dt = a * U_x;
  m.dU_dw = B * e2 / ds + t * U_x;
  const double ms = (1.0 - B * B) * (1.0 + e4) / 4.0 + (1.0 + B * B) * e2 / 2.0;
  m.dU_dB = a * ms * e2 / (ds * ds);

  const double V_x = -(B * B + 1.0) * a *
                     ((1.0 + e4) * ds - (B * B + 1.0) * (1.0 - e4) * (1.0 - e4) / 4.0) /
                     (2.0 * ds * ds);
  m.dV_dt = a * V_x;
  m.dV_dw = -(B * B + 1.0) * (1.0 - e4) / (4.0 * ds) + t * V_x;
  m.dV_dB = -a * B * (1.0 - e4) * e2 / (2.0 * ds * ds);

  m.log_zeta = cplx(x + 0.5 * std::log(ds),
                    std::atan2(B * (1.0 - e2), 1.0 + e2));
  const cplx dlz_dx = cplx((1.0 + B * B) * (1.0 - e4) / 4.0, B * e2) / ds;
  m.dlz_dt = a * dlz_dx;
  m.dlz_dw = t * dlz_dx;
  m.dlz_dB =
      cplx(B * ((1.0 + e4) / 4.0 - e2 / 2.0), (1.0 - e4) / 4.0) / ds;
  return m;
}

ModeEval eval_mode(Regime regime, double freq, double B, double t) {
  return regime == Regime::harmonic ? eval_harmonic_mode(freq, B, t)
                                    : eval_inverted_mode(freq, B, t);
}

void fix_eigenvector_signs(Eigen::MatrixXd& vecs) {
  for (int c = 0; c < vecs.cols(); ++c) {
    for (int r = 0; r < vecs.rows(); ++r) {
      if (std::abs(vecs(r, c)) > 1e-12) {
        if (vecs(r, c) < 0) vecs.col(c) *= -1.0;
        break;
      }
    }
  }
}

// --- single oscillator (harmonic / inverted) -------------------------------

class OscillatorFamily : public StateFamily {
 public:
  explicit OscillatorFamily(bool inverted)
      : StateFamily(inverted ? ModelType::iho : ModelType::ho,
                    inverted ? "iho" : "ho",
                    std::make_shared<CoordinateSystem>(
                        std::vector<std::string>{"t", "X", "W", "B"}),
                    1),
        inverted_(inverted) {}

  void validate(const ParameterPoint& p) const override {
    const double t = p.t(), X = p.at("X"), W = p.at("W"), B = p.at("B");
    if (!(t >= 0)) domain_fail(name_, "requires t >= 0 (got " + std::to_string(t) + ")");
    if (inverted_) {
      if (!(X < 0)) domain_fail(name_, "requires X < 0 (got " + std::to_string(X) + ")");
    } else {
      if (!(X > 0)) domain_fail(name_, "requires X > 0 (got " + std::to_string(X) + ")");
    }
    if (!(W > 0)) domain_fail(name_, "requires W > 0 (got " + std::to_string(W) + ")");
    if (!(B > 0)) domain_fail(name_, "requires B > 0 (got " + std::to_string(B) + ")");
  }

  ModeProfile profile(const ParameterPoint& p) const override {
    validate(p);
    const double t = p.t(), X = p.at("X"), W = p.at("W"), B = p.at("B");
    const double w = std::sqrt(std::abs(X) * W);
    // d(freq)/dX, d(freq)/dW
    const double w_X = (inverted_ ? -1.0 : 1.0) * W / (2.0 * w);
    const double w_W = std::abs(X) / (2.0 * w);

    ModeEval m = eval_mode(inverted_ ? Regime::inverted : Regime::harmonic, w, B, t);

    ModeProfile prof;
    prof.U = {m.U / W};
    prof.V = {m.V / W};
    prof.dU.resize(1, 4);
    prof.dV.resize(1, 4);
    prof.dU(0, 0) = m.dU_dt / W;
    prof.dU(0, 1) = m.dU_dw * w_X / W;
    prof.dU(0, 2) = m.dU_dw * w_W / W - m.U / (W * W);
    prof.dU(0, 3) = m.dU_dB / W;
    prof.dV(0, 0) = m.dV_dt / W;
    prof.dV(0, 1) = m.dV_dw * w_X / W;
    prof.dV(0, 2) = m.dV_dw * w_W / W - m.V / (W * W);
    prof.dV(0, 3) = m.dV_dB / W;

    // C = (B w / (W pi))^{1/4} / sqrt(zeta)
    prof.log_c = 0.25 * std::log(B * w / (W * kPi)) - 0.5 * m.log_zeta;
    prof.dlog_c = {
        -0.5 * m.dlz_dt,
        cplx(0.25 * w_X / w, 0) - 0.5 * m.dlz_dw * w_X,
        cplx(0.25 * (w_W / w - 1.0 / W), 0) - 0.5 * m.dlz_dw * w_W,
        cplx(0.25 / B, 0) - 0.5 * m.dlz_dB,
    };
    return prof;
  }

  double expected_energy(const ParameterPoint& p) const override {
    validate(p);
    const double B = p.at("B");
    const double w = std::sqrt(std::abs(p.at("X")) * p.at("W"));
    return inverted_ ? (B * B - 1.0) * w / (4.0 * B)
                     : (1.0 + B * B) * w / (4.0 * B);
  }

  int region(const ParameterPoint&) const override { return inverted_ ? 2 : 1; }

  bool near_singular(const ParameterPoint& p) const override {
    return std::abs(p.at("X")) < kSingularTol;
  }

 private:
  bool inverted_;
};

std::vector<std::string> chain_names(int n) {
  std::vector<std::string> names{"t", "X", "Y", "Z"};
  for (int i = 1; i <= n; ++i) names.push_back("B" + std::to_string(i));
  return names;
}

}  // namespace

// --- StateFamily -----------------------------------------------------------

ParameterPoint StateFamily::point(
    const std::vector<std::pair<std::string, double>>& values) const {
  std::vector<bool> seen(static_cast<size_t>(chart_->size()), false);
  ParameterPoint p{chart_, std::vector<double>(
                               static_cast<size_t>(chart_->size()), 0.0)};
  for (const auto& [name, v] : values) {
    int idx = chart_->index_of(name);
    if (seen[static_cast<size_t>(idx)])
      domain_fail(name_, "parameter '" + name + "' given twice");
    seen[static_cast<size_t>(idx)] = true;
    p.values[static_cast<size_t>(idx)] = v;
  }
  for (int i = 0; i < chart_->size(); ++i)
    if (!seen[static_cast<size_t>(i)])
      domain_fail(name_, "missing required parameter '" + chart_->name(i) + "'");
  return p;
}

// --- chain -----------------------------------------------------------------

ChainFamily::ChainFamily(Eigen::MatrixXd coupling)
    : StateFamily(ModelType::chain, "chain",
                  std::make_shared<CoordinateSystem>(
                      chain_names(static_cast<int>(coupling.rows()))),
                  static_cast<int>(coupling.rows())),
      n_(static_cast<int>(coupling.rows())),
      coupling_(std::move(coupling)) {
  if (n_ < 1) domain_fail("chain", "coupling matrix must be at least 1x1");
  if (coupling_.rows() != coupling_.cols() ||
      (coupling_ - coupling_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    domain_fail("chain", "coupling matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coupling_);
  a_ = es.eigenvalues();
  s0_ = es.eigenvectors();
  fix_eigenvector_signs(s0_);
  for (int i = 0; i + 1 < n_; ++i)
    if (a_[i + 1] - a_[i] <= 1e-9)
      domain_fail("chain", "degenerate coupling eigenvalues (gap <= 1e-9)");
}

void ChainFamily::validate(const ParameterPoint& p) const {
  if (!(p.t() >= 0)) domain_fail(name_, "requires t >= 0");
  for (int i = 1; i <= n_; ++i) {
    const double b = p.at("B" + std::to_string(i));
    if (!(b > 0))
      domain_fail(name_, "requires B" + std::to_string(i) + " > 0 (got " +
                             std::to_string(b) + ")");
  }
}

NormalModeData ChainFamily::normal_modes(const ParameterPoint& p) const {
  validate(p);
  const double X = p.at("X"), Y = p.at("Y"), Z = p.at("Z");
  NormalModeData nm;
  nm.S = s0_;
  nm.omega_sq.resize(n_);
  for (int b = 0; b < n_; ++b) nm.omega_sq[b] = a_[b] * Z + X - Y * Y;
  // Modes are kept sorted by omega^2 ascending; negative Z reverses the
  // order inherited from A's eigenvalues.
  if (Z < 0) {
    nm.omega_sq.reverseInPlace();
    nm.S = nm.S.rowwise().reverse().eval();
  }
  nm.freq.resize(n_);
  nm.regimes.resize(static_cast<size_t>(n_));
  int inverted = 0;
  for (int b = 0; b < n_; ++b) {
    const double w2 = nm.omega_sq[b];
    if (std::abs(w2) < kBoundaryTol)
      throw BifurcationBoundary("chain: omega^2 = " + std::to_string(w2) +
                                " for mode " + std::to_string(b + 1) +
                                " lies on a bifurcation boundary");
    if (w2 > 0) {
      nm.freq[b] = std::sqrt(w2);
      nm.regimes[static_cast<size_t>(b)] = Regime::harmonic;
    } else {
      nm.freq[b] = std::sqrt(-w2);
      nm.regimes[static_cast<size_t>(b)] = Regime::inverted;
      ++inverted;
    }
  }
  nm.region = 1 + inverted;
  return nm;
}

ModeProfile ChainFamily::profile(const ParameterPoint& p) const {
  const NormalModeData nm = normal_modes(p);
  const double t = p.t(), Y = p.at("Y"), Z = p.at("Z");
  const int dim = chart_->size();

  // a-eigenvalues in mode order (reversed when Z < 0).
  Eigen::VectorXd a_sorted = a_;
  if (Z < 0) a_sorted.reverseInPlace();

  ModeProfile prof;
  prof.U.resize(static_cast<size_t>(n_));
  prof.V.resize(static_cast<size_t>(n_));
  prof.dU = Eigen::MatrixXd::Zero(n_, dim);
  prof.dV = Eigen::MatrixXd::Zero(n_, dim);
  prof.log_c = 0.0;
  prof.dlog_c.assign(static_cast<size_t>(dim), cplx(0, 0));

  for (int b = 0; b < n_; ++b) {
    const bool inverted = nm.regimes[static_cast<size_t>(b)] == Regime::inverted;
    const double w = nm.freq[b];
    const double B = p.at("B" + std::to_string(b + 1));
    const int b_idx = chart_->index_of("B" + std::to_string(b + 1));

    // d(freq)/d{X,Y,Z} through omega^2 = a Z + X - Y^2 (or its negative).
    const double sgn = inverted ? -1.0 : 1.0;
    const double w_X = sgn / (2.0 * w);
    const double w_Y = -sgn * Y / w;
    const double w_Z = sgn * a_sorted[b] / (2.0 * w);

    ModeEval m = eval_mode(inverted ? Regime::inverted : Regime::harmonic, w, B, t);

    prof.U[static_cast<size_t>(b)] = m.U;
    prof.V[static_cast<size_t>(b)] = Y + m.V;

    prof.dU(b, 0) = m.dU_dt;
    prof.dU(b, 1) = m.dU_dw * w_X;
    prof.dU(b, 2) = m.dU_dw * w_Y;
    prof.dU(b, 3) = m.dU_dw * w_Z;
    prof.dU(b, b_idx) = m.dU_dB;

    prof.dV(b, 0) = m.dV_dt;
    prof.dV(b, 1) = m.dV_dw * w_X;
    prof.dV(b, 2) = 1.0 + m.dV_dw * w_Y;  // the direct Y shift of V
    prof.dV(b, 3) = m.dV_dw * w_Z;
    prof.dV(b, b_idx) = m.dV_dB;

    prof.log_c += 0.25 * std::log(B * w / kPi) - 0.5 * m.log_zeta;
    prof.dlog_c[0] += -0.5 * m.dlz_dt;
    prof.dlog_c[1] += cplx(0.25 * w_X / w, 0) - 0.5 * m.dlz_dw * w_X;
    prof.dlog_c[2] += cplx(0.25 * w_Y / w, 0) - 0.5 * m.dlz_dw * w_Y;
    prof.dlog_c[3] += cplx(0.25 * w_Z / w, 0) - 0.5 * m.dlz_dw * w_Z;
    prof.dlog_c[static_cast<size_t>(b_idx)] +=
        cplx(0.25 / B, 0) - 0.5 * m.dlz_dB;
  }
  return prof;
}

double ChainFamily::expected_energy(const ParameterPoint& p) const {
  const NormalModeData nm = normal_modes(p);
  double e = 0.0;
  for (int b = 0; b < n_; ++b) {
    const double B = p.at("B" + std::to_string(b + 1));
    const double f = nm.freq[b];
    e += nm.regimes[static_cast<size_t>(b)] == Regime::inverted
             ? (B * B - 1.0) * f / (4.0 * B)
             : (1.0 + B * B) * f / (4.0 * B);
  }
  return e;
}

int ChainFamily::region(const ParameterPoint& p) const {
  return normal_modes(p).region;
}

bool ChainFamily::near_singular(const ParameterPoint& p) const {
  const double X = p.at("X"), Y = p.at("Y"), Z = p.at("Z");
  for (int b = 0; b < n_; ++b)
    if (std::abs(a_[b] * Z + X - Y * Y) < kSingularTol) return true;
  return false;
}

std::vector<std::string> ChainFamily::default_curvature_coords() const {
  std::vector<std::string> coords{"X", "Y"};
  if (n_ != 2) coords.push_back("Z");
  for (int i = 1; i <= n_; ++i) coords.push_back("B" + std::to_string(i));
  return coords;
}

// --- HOTDF -----------------------------------------------------------------

HotdfFamily::HotdfFamily(int level)
    : StateFamily(ModelType::hotdf, "hotdf",
                  std::make_shared<CoordinateSystem>(
                      std::vector<std::string>{"t", "A", "omega0"}),
                  1),
      level_(level) {
  if (level < 0) domain_fail("hotdf", "level n must be >= 0");
}

void HotdfFamily::validate(const ParameterPoint& p) const {
  if (!(p.t() >= 0)) domain_fail(name_, "requires t >= 0");
  if (!(p.at("omega0") > 0)) domain_fail(name_, "requires omega0 > 0");
  if (!(hotdf_frequency_sq(p) > 0))
    domain_fail(name_,
                "frequency positivity omega0^2 e^{2At} - A^2/4 > 0 violated");
}

ModeProfile HotdfFamily::profile(const ParameterPoint& p) const {
  validate(p);
  if (level_ != 0)
    domain_fail(name_, "excited invariant states are not plain Gaussians; "
                       "profile is available at level 0 only");
  const double t = p.t(), A = p.at("A"), w0 = p.at("omega0");
  if (std::abs(A) < 1e-12)
    domain_fail(name_, "the phase convention is singular at A = 0; "
                       "use the closed-form tensors instead");
  const double eAt = std::exp(A * t);

  ModeProfile prof;
  prof.U = {w0 * eAt};
  prof.V = {A / 2.0};
  prof.dU.resize(1, 3);
  prof.dV.resize(1, 3);
  prof.dU(0, 0) = A * w0 * eAt;
  prof.dU(0, 1) = w0 * t * eAt;
  prof.dU(0, 2) = eAt;
  prof.dV(0, 0) = 0.0;
  prof.dV(0, 1) = 0.5;
  prof.dV(0, 2) = 0.0;

  // |C|^2 = sqrt(U/pi); phase = -h/2 with h' = 1/gamma^2.
  const double h = w0 * eAt / A;
  prof.log_c = cplx(0.25 * std::log(w0 * eAt / kPi), -0.5 * h);
  prof.dlog_c = {
      cplx(A / 4.0, -0.5 * w0 * eAt),
      cplx(t / 4.0, -0.5 * w0 * eAt * (A * t - 1.0) / (A * A)),
      cplx(0.25 / w0, -0.5 * eAt / A),
  };
  return prof;
}

double HotdfFamily::expected_energy(const ParameterPoint& p) const {
  validate(p);
  return (level_ + 0.5) * p.at("omega0") * std::exp(p.at("A") * p.t());
}

bool HotdfFamily::near_singular(const ParameterPoint& p) const {
  return hotdf_frequency_sq(p) < kSingularTol;
}

// --- factory ---------------------------------------------------------------

ModelPtr build_model(const ModelKind& kind) {
  switch (kind.type) {
    case ModelType::ho:
      return std::make_shared<OscillatorFamily>(false);
    case ModelType::iho:
      return std::make_shared<OscillatorFamily>(true);
    case ModelType::hotdf:
      return std::make_shared<HotdfFamily>(kind.level);
    case ModelType::chain:
      return std::make_shared<ChainFamily>(kind.coupling);
  }
  throw DomainError("unknown model kind");
}

// --- normal modes ----------------------------------------------------------

NormalModeData normal_mode_decomposition(const Eigen::MatrixXd& A, double X,
                                         double Y, double Z) {
  ChainFamily chain(A);
  std::vector<std::pair<std::string, double>> vals{
      {"t", 0.0}, {"X", X}, {"Y", Y}, {"Z", Z}};
  for (int i = 1; i <= chain.particles(); ++i)
    vals.emplace_back("B" + std::to_string(i), 1.0);
  return chain.normal_modes(chain.point(vals));
}

// --- B analysis ------------------------------------------------------------

std::vector<double> b_solutions(double e_bar, double freq, Regime regime) {
  if (!(freq > 0)) throw DomainError("b_solutions: frequency must be positive");
  if (regime == Regime::harmonic) {
    const double disc = 4.0 * e_bar * e_bar - freq * freq;
    if (disc < 0)
      throw NoSolutionError(
          "b_solutions: no harmonic solution below the ground-state energy "
          "omega/2");
    const double root = std::sqrt(disc);
    const double b_plus = (2.0 * e_bar + root) / freq;
    if (root == 0.0) return {b_plus};
    return {b_plus, (2.0 * e_bar - root) / freq};
  }
  return {(2.0 * e_bar + std::sqrt(freq * freq + 4.0 * e_bar * e_bar)) / freq};
}

std::pair<double, double> extremal_b(double t, double freq, Regime regime) {
  const double x = freq * t;
  double num_p, num_m;
  if (regime == Regime::harmonic) {
    const double s = std::sin(2.0 * x);
    num_p = 2.0 * x + s;
    num_m = 2.0 * x - s;
  } else {
    if (!(t > 0)) throw DomainError("extremal_b: inverted regime requires t > 0");
    if (2.0 * x > kHyperbolicOverflowAt)
      throw RangeOverflow("extremal_b: sinh argument exceeds overflow guard");
    const double s = std::sinh(2.0 * x);
    num_p = s + 2.0 * x;
    num_m = s - 2.0 * x;
  }
  if (num_p <= 0 || num_m < 0)
    throw DomainError("extremal_b: negative radicand");
  if (num_m == 0) throw DomainError("extremal_b: undefined at t = 0");
  return {std::sqrt(num_p / num_m), std::sqrt(num_m / num_p)};
}

// --- overlaps --------------------------------------------------------------

std::complex<double> log_overlap(const ModeProfile& a, const ModeProfile& b) {
  if (a.modes() != b.modes())
    throw DomainError("log_overlap: mode counts differ");
  cplx acc = std::conj(a.log_c) + b.log_c;
  for (int m = 0; m < a.modes(); ++m) {
    const cplx sum = std::conj(a.omega(m)) + b.omega(m);
    acc += 0.5 * (std::log(2.0 * kPi) - std::log(sum));
  }
  return acc;
}

double fidelity_overlap(const ModelPtr& model, const ParameterPoint& p1,
                        const ParameterPoint& p2) {
  const ModeProfile a = model->profile(p1);
  const ModeProfile b = model->profile(p2);
  return std::exp(std::real(log_overlap(a, b)));
}

}  // namespace qgeo

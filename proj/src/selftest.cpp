#include <cmath>
#include <sstream>

#include "qgeo/analysis.hpp"
#include "qgeo/entanglement.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/qgt.hpp"
#include "qgeo/scenario.hpp"

namespace qgeo {

namespace {

bool close(double a, double b, double tol, std::string& msg) {
  if (std::abs(a - b) <= tol) return true;
  std::ostringstream os;
  os << "expected " << b << ", got " << a << " (tol " << tol << ")";
  msg = os.str();
  return false;
}

ParameterPoint ho_point(const ModelPtr& m, double t, double x, double w,
                        double b) {
  return m->point({{"t", t}, {"X", x}, {"W", w}, {"B", b}});
}

}  // namespace

std::vector<SelftestCase> selftest_cases() {
  std::vector<SelftestCase> cases;

  cases.push_back({"grid-product-count", [](std::string& msg) {
    auto chart = std::make_shared<CoordinateSystem>(
        std::vector<std::string>{"t", "B", "Y"});
    auto grid = make_grid(chart, {{"B", 0.5, 2.0, 4}, {"Y", 1.0, 3.0, 3}},
                          {{"t", 0.0}});
    return close(static_cast<double>(grid.size()), 12.0, 0.0, msg);
  }});

  cases.push_back({"stencil-fourth-order", [](std::string& msg) {
    auto chart = std::make_shared<CoordinateSystem>(
        std::vector<std::string>{"t"});
    ParameterPoint p{chart, {0.0}};
    auto d = partial([](const ParameterPoint& q) { return std::sin(q.t()); },
                     p, 0, DiffConfig::fourth());
    return close(d.value, 1.0, 1e-10, msg);
  }});

  cases.push_back({"ground-state-metric", [](std::string& msg) {
    auto m = build_model(ModelKind::HO());
    auto q = tqgt(m, ho_point(m, 1.0, 1.0, 1.0, 1.0),
                  CoordinateSet::of(m->chart(), {"X", "W"}));
    return close(q.g(0, 0), 1.0 / 32.0, 1e-12, msg) &&
           close(q.g(0, 1), -1.0 / 32.0, 1e-12, msg);
  }});

  cases.push_back({"hermiticity", [](std::string& msg) {
    auto m = build_model(ModelKind::HO());
    auto q = tqgt(m, ho_point(m, 1.7, 1.3, 0.8, 2.2),
                  CoordinateSet::all(m->chart()));
    return close((q.Q - q.Q.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-12, msg);
  }});

  cases.push_back({"b-solution-product", [](std::string& msg) {
    auto roots = b_solutions(0.625, 1.0, Regime::harmonic);
    return close(roots[0] * roots[1], 1.0, 1e-12, msg);
  }});

  cases.push_back({"palumbo-oscillator", [](std::string& msg) {
    auto m = build_model(ModelKind::HO());
    return close(palumbo_residual(m, ho_point(m, 2.0, 1.0, 1.0, 2.0), 0, 1),
                 0.0, 1e-10, msg);
  }});

  cases.push_back({"hyperbolic-curvature", [](std::string& msg) {
    auto m = build_model(ModelKind::HO());
    auto rep = scalar_curvature(m, ho_point(m, 1.0, 1.0, 1.0, 2.0),
                                CoordinateSet::of(m->chart(), {"t", "B"}));
    return close(rep.R, -16.0, 5e-3, msg);
  }});

  cases.push_back({"fock-normalization", [](std::string& msg) {
    auto m = build_model(ModelKind::HO());
    auto fe = fock_coefficients(ho_point(m, 0.3, 1.0, 1.0, 2.0), 40);
    return close(fe.raw_norm, 1.0, 1e-12, msg);
  }});

  cases.push_back({"pure-state-purity", [](std::string& msg) {
    Eigen::MatrixXd a(2, 2);
    a << 2, -1, -1, 2;
    auto m = build_model(ModelKind::Chain(a));
    auto p = m->point({{"t", 0.7}, {"X", 1.0}, {"Y", 1.0}, {"Z", 1.0},
                       {"B1", 1.2}, {"B2", 0.8}});
    return close(purity(m, p, {0, 1}).mu, 1.0, 1e-10, msg);
  }});

  cases.push_back({"covariance-blocks", [](std::string& msg) {
    Eigen::MatrixXd a(2, 2);
    a << 2, -1, -1, 2;
    auto m = build_model(ModelKind::Chain(a));
    auto p = m->point({{"t", 0.7}, {"X", 1.0}, {"Y", 1.0}, {"Z", 1.0},
                       {"B1", 1.0}, {"B2", 1.0}});
    auto cov = covariance_matrix(m, p);
    const int n = 2;
    double gap =
        (cov.sigma.topRightCorner(n, n) + 0.5 * cov.Y * cov.D).cwiseAbs()
            .maxCoeff();
    return close(gap, 0.0, 1e-12, msg);
  }});

  cases.push_back({"gauge-invariance", [](std::string& msg) {
    auto m = build_model(ModelKind::HO());
    auto rep = gauge_check(m, ho_point(m, 1.1, 1.2, 0.9, 1.6),
                           [](const ParameterPoint& q) {
                             return 0.2 * q.t() + 0.1 * q.at("X") * q.at("X");
                           });
    return close(rep.max_abs_delta_q, 0.0, 1e-7, msg);
  }});

  cases.push_back({"fidelity-at-coincidence", [](std::string& msg) {
    auto m = build_model(ModelKind::IHO());
    auto p = ho_point(m, 0.8, -1.0, 1.0, 1.4);
    return close(fidelity_overlap(m, p, p), 1.0, 1e-12, msg);
  }});

  cases.push_back({"normalized-range", [](std::string& msg) {
    auto norm = normalized_curvature({3.0, 4.5, 2.5});
    double span = *std::max_element(norm.values.begin(), norm.values.end()) -
                  *std::min_element(norm.values.begin(), norm.values.end());
    return close(span, 1.0, 1e-12, msg);
  }});

  return cases;
}

}  // namespace qgeo

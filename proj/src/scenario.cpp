#include "qgeo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "json.hpp"
#include "qgeo/analysis.hpp"
#include "qgeo/entanglement.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/qgt.hpp"

namespace qgeo {

namespace {

using ojson = nlohmann::ordered_json;

const std::set<std::string> kOperations = {
    "tqgt", "connection", "curvature", "palumbo", "purity",
    "bifurcation-scan", "density", "fock", "track-fit"};

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const ojson& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) config_fail(path + "." + key, "unknown key");
  }
}

double require_number(const ojson& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  return v.get<double>();
}

std::string require_string(const ojson& v, const std::string& path) {
  if (!v.is_string()) config_fail(path, "expected a string");
  return v.get<std::string>();
}

ModelSpec parse_model(const ojson& m, const std::string& path) {
  if (!m.is_object()) config_fail(path, "expected an object");
  check_keys(m, path, {"kind", "level", "coupling"});
  ModelSpec spec;
  if (!m.contains("kind")) config_fail(path + ".kind", "missing");
  spec.kind = require_string(m.at("kind"), path + ".kind");
  if (spec.kind != "ho" && spec.kind != "iho" && spec.kind != "hotdf" &&
      spec.kind != "chain")
    config_fail(path + ".kind", "unknown model '" + spec.kind + "'");
  if (m.contains("level")) {
    if (spec.kind != "hotdf")
      config_fail(path + ".level", "only valid for hotdf");
    if (!m.at("level").is_number_integer() || m.at("level").get<int>() < 0)
      config_fail(path + ".level", "expected a non-negative integer");
    spec.level = m.at("level").get<int>();
  }
  if (spec.kind == "chain") {
    if (!m.contains("coupling"))
      config_fail(path + ".coupling", "missing chain coupling matrix");
    const ojson& rows = m.at("coupling");
    if (!rows.is_array() || rows.empty())
      config_fail(path + ".coupling", "expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    spec.coupling.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const ojson& row = rows[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        config_fail(path + ".coupling", "matrix must be square");
      for (Eigen::Index j = 0; j < n; ++j)
        spec.coupling(i, j) =
            require_number(row[static_cast<size_t>(j)],
                           path + ".coupling[" + std::to_string(i) + "][" +
                               std::to_string(j) + "]");
    }
  } else if (m.contains("coupling")) {
    config_fail(path + ".coupling", "only valid for chain");
  }
  return spec;
}

Scenario parse_scenario(const ojson& s, const std::string& path) {
  if (!s.is_object()) config_fail(path, "expected an object");
  check_keys(s, path,
             {"name", "model", "operation", "sweep", "coords", "output",
              "subset", "search", "bracket", "family", "n_max", "q",
              "tolerances"});
  Scenario sc;
  for (const char* req : {"name", "model", "operation", "sweep", "output"})
    if (!s.contains(req)) config_fail(path + "." + req, "missing");

  sc.name = require_string(s.at("name"), path + ".name");
  sc.model = parse_model(s.at("model"), path + ".model");
  sc.operation = require_string(s.at("operation"), path + ".operation");
  if (!kOperations.count(sc.operation))
    config_fail(path + ".operation", "unknown operation '" + sc.operation + "'");
  sc.output = require_string(s.at("output"), path + ".output");

  const ojson& sweep = s.at("sweep");
  if (!sweep.is_object()) config_fail(path + ".sweep", "expected an object");
  check_keys(sweep, path + ".sweep", {"ranges", "fixed"});
  if (sweep.contains("ranges")) {
    const ojson& ranges = sweep.at("ranges");
    if (!ranges.is_object())
      config_fail(path + ".sweep.ranges", "expected an object");
    for (const auto& [name, spec] : ranges.items()) {
      const std::string rpath = path + ".sweep.ranges." + name;
      if (!spec.is_array() || spec.size() != 3)
        config_fail(rpath, "expected [lo, hi, count]");
      SweepRange r;
      r.name = name;
      r.lo = require_number(spec[0], rpath + "[0]");
      r.hi = require_number(spec[1], rpath + "[1]");
      if (!spec[2].is_number_integer())
        config_fail(rpath + "[2]", "count must be an integer");
      r.count = spec[2].get<int>();
      sc.ranges.push_back(r);
    }
  }
  if (sweep.contains("fixed")) {
    const ojson& fixed = sweep.at("fixed");
    if (!fixed.is_object())
      config_fail(path + ".sweep.fixed", "expected an object");
    for (const auto& [name, v] : fixed.items())
      sc.fixed.emplace_back(
          name, require_number(v, path + ".sweep.fixed." + name));
  }

  if (s.contains("coords")) {
    const ojson& coords = s.at("coords");
    if (!coords.is_array()) config_fail(path + ".coords", "expected an array");
    for (size_t i = 0; i < coords.size(); ++i)
      sc.coords.push_back(require_string(
          coords[i], path + ".coords[" + std::to_string(i) + "]"));
  }
  if (s.contains("subset")) {
    const ojson& subset = s.at("subset");
    if (!subset.is_array()) config_fail(path + ".subset", "expected an array");
    for (size_t i = 0; i < subset.size(); ++i) {
      if (!subset[i].is_number_integer())
        config_fail(path + ".subset[" + std::to_string(i) + "]",
                    "expected an integer particle index");
      sc.subset.push_back(subset[i].get<int>());
    }
  }
  if (s.contains("search"))
    sc.search = require_string(s.at("search"), path + ".search");
  if (s.contains("bracket")) {
    const ojson& b = s.at("bracket");
    if (!b.is_array() || b.size() != 2)
      config_fail(path + ".bracket", "expected [lo, hi]");
    sc.bracket_lo = require_number(b[0], path + ".bracket[0]");
    sc.bracket_hi = require_number(b[1], path + ".bracket[1]");
  }
  if (s.contains("family")) {
    sc.family = require_string(s.at("family"), path + ".family");
    if (sc.family != "sin" && sc.family != "sinh")
      config_fail(path + ".family", "expected 'sin' or 'sinh'");
  }
  if (s.contains("n_max")) {
    if (!s.at("n_max").is_number_integer() || s.at("n_max").get<int>() < 0)
      config_fail(path + ".n_max", "expected a non-negative integer");
    sc.n_max = s.at("n_max").get<int>();
  }
  if (s.contains("q")) {
    const ojson& q = s.at("q");
    if (!q.is_array() || q.size() != 3)
      config_fail(path + ".q", "expected [lo, hi, count]");
    sc.q_window = {require_number(q[0], path + ".q[0]"),
                   require_number(q[1], path + ".q[1]"),
                   require_number(q[2], path + ".q[2]")};
  }
  if (s.contains("tolerances")) {
    const ojson& tol = s.at("tolerances");
    if (!tol.is_object()) config_fail(path + ".tolerances", "expected object");
    check_keys(tol, path + ".tolerances", {"fd_step"});
    if (tol.contains("fd_step"))
      sc.fd_step = require_number(tol.at("fd_step"), path + ".tolerances.fd_step");
  }

  // Canonical digest of the scenario document (sorted keys).
  sc.digest = nlohmann::json::parse(s.dump()).dump();
  return sc;
}

}  // namespace

const char* version() { return "0.1.0"; }

ModelKind ModelSpec::to_kind() const {
  if (kind == "ho") return ModelKind::HO();
  if (kind == "iho") return ModelKind::IHO();
  if (kind == "hotdf") return ModelKind::Hotdf(level);
  return ModelKind::Chain(coupling);
}

std::vector<Scenario> parse_config(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_fail("$", "expected a top-level object");
  check_keys(doc, "$", {"scenarios"});
  if (!doc.contains("scenarios") || !doc.at("scenarios").is_array())
    config_fail("$.scenarios", "expected an array");
  std::vector<Scenario> out;
  const ojson& arr = doc.at("scenarios");
  for (size_t i = 0; i < arr.size(); ++i)
    out.push_back(
        parse_scenario(arr[i], "$.scenarios[" + std::to_string(i) + "]"));
  return out;
}

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  for (const auto& line : footer) out += line + '\n';
  return out;
}

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

void parallel_rows(size_t n, int threads,
                   const std::function<void(size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = std::min<int>(threads, static_cast<int>(n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (size_t i = static_cast<size_t>(w); i < n;
           i += static_cast<size_t>(workers))
        body(i);
    });
  for (auto& th : pool) th.join();
}

struct RowBuilder {
  std::vector<std::string> cells;
  std::string flag;

  void value(double v) {
    if (std::isfinite(v)) {
      cells.push_back(format_cell(v));
    } else {
      cells.emplace_back();
      if (flag.empty()) flag = "nonfinite";
    }
  }
  void text(std::string s) { cells.push_back(std::move(s)); }
  void blank(size_t n) { cells.insert(cells.end(), n, std::string()); }
};

struct OpContext {
  const Scenario& sc;
  ModelPtr model;
  std::vector<ParameterPoint> grid;
  std::vector<std::string> swept;  // column names of swept parameters
  int threads = 1;
};

void swept_cells(const OpContext& ctx, size_t i, RowBuilder& row) {
  for (const auto& name : ctx.swept)
    row.value(ctx.grid[i].at(name));
}

CsvTable run_pointwise(const OpContext& ctx,
                       const std::vector<std::string>& out_cols,
                       const std::function<void(const ParameterPoint&,
                                                RowBuilder&)>& compute) {
  CsvTable table;
  table.header = ctx.swept;
  table.header.insert(table.header.end(), out_cols.begin(), out_cols.end());
  table.header.emplace_back("flag");
  table.rows.resize(ctx.grid.size());
  parallel_rows(ctx.grid.size(), ctx.threads, [&](size_t i) {
    RowBuilder row;
    swept_cells(ctx, i, row);
    try {
      compute(ctx.grid[i], row);
    } catch (const Error& e) {
      row.cells.resize(ctx.swept.size());
      row.blank(out_cols.size());
      row.flag = "error: " + sanitize(e.what());
    }
    if (row.cells.size() != ctx.swept.size() + out_cols.size())
      row.blank(ctx.swept.size() + out_cols.size() - row.cells.size());
    row.cells.push_back(row.flag);
    table.rows[i] = std::move(row.cells);
  });
  return table;
}

CoordinateSet scenario_coords(const OpContext& ctx) {
  if (ctx.sc.coords.empty())
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': operation requires a coords list");
  return CoordinateSet::of(ctx.model->chart(), ctx.sc.coords);
}

CsvTable run_tqgt(const OpContext& ctx) {
  const CoordinateSet cs = scenario_coords(ctx);
  const auto labels = cs.labels(ctx.model->chart());
  std::vector<std::string> cols;
  for (int i = 0; i < cs.size(); ++i)
    for (int j = i; j < cs.size(); ++j)
      cols.push_back("g_" + labels[static_cast<size_t>(i)] + "_" +
                     labels[static_cast<size_t>(j)]);
  for (int i = 0; i < cs.size(); ++i)
    for (int j = i + 1; j < cs.size(); ++j)
      cols.push_back("F_" + labels[static_cast<size_t>(i)] + "_" +
                     labels[static_cast<size_t>(j)]);
  return run_pointwise(ctx, cols, [&](const ParameterPoint& p, RowBuilder& row) {
    const QGTResult q = tqgt(ctx.model, p, cs);
    if (q.singular) row.flag = "singular";
    for (int i = 0; i < cs.size(); ++i)
      for (int j = i; j < cs.size(); ++j) row.value(q.g(i, j));
    for (int i = 0; i < cs.size(); ++i)
      for (int j = i + 1; j < cs.size(); ++j) row.value(q.F(i, j));
  });
}

CsvTable run_connection(const OpContext& ctx) {
  std::vector<std::string> cols;
  for (const auto& name : ctx.model->chart().names()) cols.push_back("A_" + name);
  return run_pointwise(ctx, cols, [&](const ParameterPoint& p, RowBuilder& row) {
    const ConnectionVector a = berry_connection(ctx.model, p);
    for (double v : a.A) row.value(v);
  });
}

CsvTable run_curvature(const OpContext& ctx) {
  const CoordinateSet cs = scenario_coords(ctx);
  CurvatureOptions opts;
  if (ctx.sc.fd_step > 0) opts.step = ctx.sc.fd_step;
  return run_pointwise(ctx, {"R", "step"}, [&](const ParameterPoint& p,
                                               RowBuilder& row) {
    const CurvatureReport rep = scalar_curvature(ctx.model, p, cs, opts);
    if (rep.degraded) row.flag = "degraded";
    row.value(rep.R);
    row.value(rep.step_used);
  });
}

CsvTable run_palumbo(const OpContext& ctx) {
  const CoordinateSet cs = scenario_coords(ctx);
  if (cs.size() != 2)
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': palumbo needs exactly two coords");
  return run_pointwise(
      ctx, {"det_g", "F", "residual"},
      [&](const ParameterPoint& p, RowBuilder& row) {
        const QGTResult q = tqgt(ctx.model, p, cs);
        row.value(q.g.determinant());
        row.value(q.F(0, 1));
        row.value(palumbo_residual(ctx.model, p, cs[0], cs[1]));
      });
}

CsvTable run_purity(const OpContext& ctx) {
  if (ctx.sc.subset.empty())
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': purity needs a non-empty subset");
  return run_pointwise(ctx, {"mu", "region"},
                       [&](const ParameterPoint& p, RowBuilder& row) {
                         const PurityResult r =
                             purity(ctx.model, p, ctx.sc.subset);
                         row.value(r.mu);
                         row.value(static_cast<double>(r.region));
                       });
}

CsvTable run_bifurcation(const OpContext& ctx, CsvTable&& base) {
  if (ctx.sc.subset.empty())
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': bifurcation-scan needs a non-empty subset");
  if (ctx.swept.size() != 1)
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': bifurcation-scan needs exactly one swept parameter");
  const BifurcationScan scan =
      bifurcation_scan(ctx.model, ctx.grid, ctx.sc.subset);
  CsvTable table = std::move(base);
  table.header = {ctx.swept[0], "mu", "mu_mirror", "region", "region_mirror",
                  "flag"};
  for (size_t i = 0; i < ctx.grid.size(); ++i) {
    RowBuilder row;
    row.value(ctx.grid[i].at(ctx.swept[0]));
    row.value(scan.near_side[i].mu);
    row.value(scan.far_side[i].mu);
    row.value(static_cast<double>(scan.near_region));
    row.value(static_cast<double>(scan.far_region));
    row.cells.push_back(row.flag);
    table.rows.push_back(std::move(row.cells));
  }
  table.footer.push_back("# limit: " + format_cell(scan.near_limit));
  table.footer.push_back("# limit-mirror: " + format_cell(scan.far_limit));
  table.footer.push_back(std::string("# continuous: ") +
                         (scan.continuous ? "yes" : "no"));
  table.footer.push_back(std::string("# zero-limit: ") +
                         (scan.zero_limit ? "yes" : "no"));
  return table;
}

CsvTable run_density(const OpContext& ctx) {
  if (ctx.model->type() != ModelType::ho)
    throw ConfigError("scenario '" + ctx.sc.name + "': density needs kind ho");
  if (ctx.swept.size() != 1 || ctx.swept[0] != "t")
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': density sweeps exactly 't'");
  std::vector<double> t_grid;
  for (const auto& p : ctx.grid) t_grid.push_back(p.t());
  std::vector<double> q_grid;
  const int qn = std::max(2, static_cast<int>(ctx.sc.q_window[2]));
  for (int i = 0; i < qn; ++i)
    q_grid.push_back(ctx.sc.q_window[0] +
                     (ctx.sc.q_window[1] - ctx.sc.q_window[0]) * i / (qn - 1));
  const ParameterPoint& p0 = ctx.grid.front();
  const DensityReport rep =
      density_analysis(p0.at("X"), p0.at("W"), p0.at("B"), q_grid, t_grid);

  CsvTable table;
  table.header = {"row_kind", "time", "classification", "rho0", "flag"};
  for (size_t i = 0; i < rep.critical_times.size(); ++i) {
    RowBuilder row;
    row.text("critical");
    row.value(rep.critical_times[i]);
    row.text(rep.kinds[i] == DensityReport::Kind::maximum ? "max" : "min");
    row.value(rep.peak_values[i]);
    row.cells.push_back(row.flag);
    table.rows.push_back(std::move(row.cells));
  }
  const double w = std::sqrt(p0.at("X") * p0.at("W"));
  for (double tau : rep.crossing_times) {
    RowBuilder row;
    row.text("crossing");
    row.value(tau);
    row.text("");
    // Density value shared by B and 1/B at the crossing.
    const double s = std::sin(w * tau), c = std::cos(w * tau);
    const double B = p0.at("B");
    const double u = B * w / (p0.at("W") * (B * B * s * s + c * c));
    row.value(std::sqrt(u / 3.14159265358979323846));
    row.cells.push_back(row.flag);
    table.rows.push_back(std::move(row.cells));
  }
  table.footer.push_back("# max-crossing-gap: " +
                         format_cell(rep.max_crossing_gap));
  return table;
}

CsvTable run_fock(const OpContext& ctx) {
  if (ctx.model->type() != ModelType::ho)
    throw ConfigError("scenario '" + ctx.sc.name + "': fock needs kind ho");
  if (!ctx.swept.empty())
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': fock takes fixed parameters only");
  const ParameterPoint& p = ctx.grid.front();
  const FockExpansion fe = fock_coefficients(p, ctx.sc.n_max);
  const double w = std::sqrt(p.at("X") * p.at("W"));

  CsvTable table;
  table.header = {"n", "re_c", "im_c", "abs2", "energy", "flag"};
  for (size_t n = 0; n < fe.coefficients.size(); ++n) {
    RowBuilder row;
    row.value(static_cast<double>(n));
    row.value(fe.coefficients[n].real());
    row.value(fe.coefficients[n].imag());
    row.value(std::norm(fe.coefficients[n]));
    row.value((2.0 * static_cast<double>(n) + 0.5) * w);
    if (fe.truncation_warning) row.flag = "truncated";
    row.cells.push_back(row.flag);
    table.rows.push_back(std::move(row.cells));
  }
  table.footer.push_back("# raw-norm: " + format_cell(fe.raw_norm));
  table.footer.push_back("# gamma-scale: " + format_cell(fe.gamma_scale));
  return table;
}

CsvTable run_track_fit(const OpContext& ctx) {
  if (ctx.model->type() != ModelType::chain)
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': track-fit needs kind chain");
  if (ctx.swept.size() != 1 || ctx.swept[0] != "t")
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': track-fit sweeps exactly 't'");
  if (ctx.sc.search.empty())
    throw ConfigError("scenario '" + ctx.sc.name +
                      "': track-fit needs a search coordinate");
  const CoordinateSet cs = scenario_coords(ctx);
  const int search_idx = ctx.model->chart().index_of(ctx.sc.search);

  CurvatureOptions opts;
  opts.richardson = false;
  opts.step = ctx.sc.fd_step > 0 ? ctx.sc.fd_step : 2e-3;
  PointFn quantity = [&](const ParameterPoint& q) {
    return scalar_curvature(ctx.model, q, cs, opts).R;
  };

  std::vector<double> t_grid;
  for (const auto& p : ctx.grid) t_grid.push_back(p.t());
  const Trajectory traj =
      track_extrema(ctx.grid.front(), quantity, t_grid, search_idx,
                    ctx.sc.bracket_lo, ctx.sc.bracket_hi);

  const auto chain = std::static_pointer_cast<const ChainFamily>(ctx.model);
  std::vector<double> seeds;
  for (double f : chain->normal_modes(ctx.grid.front()).freq)
    seeds.push_back(2.0 * f);
  const FitFamily family =
      ctx.sc.family == "sinh" ? FitFamily::sinh_damped : FitFamily::sin_damped;
  const FitResult fit = fit_damped_trajectory(traj, family, seeds);

  CsvTable table;
  table.header = {"t", "location", "kind", "flag"};
  for (const auto& s : traj.samples) {
    RowBuilder row;
    row.value(s.t);
    row.value(s.location);
    row.text(s.is_max ? "max" : "min");
    row.cells.push_back(row.flag);
    table.rows.push_back(std::move(row.cells));
  }
  table.footer.push_back("# fit-family: " + ctx.sc.family);
  table.footer.push_back("# fit-c0: " + format_cell(fit.c0));
  table.footer.push_back("# fit-c1: " + format_cell(fit.c1));
  table.footer.push_back("# fit-c2: " + format_cell(fit.c2));
  table.footer.push_back("# fit-c3: " + format_cell(fit.c3));
  table.footer.push_back("# fit-r2: " + format_cell(fit.r_squared));
  table.footer.push_back(std::string("# fit-converged: ") +
                         (fit.converged ? "yes" : "no"));
  table.footer.push_back("# skipped-times: " +
                         std::to_string(traj.no_extremum_t.size()));
  return table;
}

}  // namespace

CsvTable run_scenario(const Scenario& s, const std::string& out_dir,
                      int threads) {
  OpContext ctx{s, build_model(s.model.to_kind()), {}, {}, threads};
  ctx.grid = make_grid(ctx.model->chart_ptr(), s.ranges, s.fixed);
  if (ctx.grid.empty()) throw ConfigError("scenario '" + s.name + "': empty grid");
  for (const auto& r : s.ranges) ctx.swept.push_back(r.name);

  CsvTable table;
  if (s.operation == "tqgt") table = run_tqgt(ctx);
  else if (s.operation == "connection") table = run_connection(ctx);
  else if (s.operation == "curvature") table = run_curvature(ctx);
  else if (s.operation == "palumbo") table = run_palumbo(ctx);
  else if (s.operation == "purity") table = run_purity(ctx);
  else if (s.operation == "bifurcation-scan") table = run_bifurcation(ctx, CsvTable{});
  else if (s.operation == "density") table = run_density(ctx);
  else if (s.operation == "fock") table = run_fock(ctx);
  else if (s.operation == "track-fit") table = run_track_fit(ctx);
  else throw ConfigError("unknown operation '" + s.operation + "'");

  // Provenance footer; the version line is the only non-reproducible-by-
  // content entry and is excluded from byte-identity comparisons.
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(s.digest)));
  std::string fixed_desc;
  for (const auto& [k, v] : s.fixed)
    fixed_desc += (fixed_desc.empty() ? "" : " ") + k + "=" + format_cell(v);
  table.footer.push_back("# model: " + s.model.kind);
  table.footer.push_back("# operation: " + s.operation);
  table.footer.push_back("# fixed: " + fixed_desc);
  table.footer.push_back("# config-hash: " + std::string(hash));
  table.footer.push_back("# qgeo-version: " + std::string(version()));

  namespace fs = std::filesystem;
  fs::path out = fs::path(s.output).is_absolute()
                     ? fs::path(s.output)
                     : fs::path(out_dir) / s.output;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream stream(out, std::ios::binary);
  if (!stream) throw ConfigError("cannot open output file " + out.string());
  stream << table.to_string();
  return table;
}

}  // namespace qgeo

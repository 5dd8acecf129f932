#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qgeo/models.hpp"
#include "qgeo/param_space.hpp"

namespace qgeo {

const char* version();

struct ModelSpec {
  std::string kind;          // ho | iho | hotdf | chain
  int level = 0;             // hotdf Lewis level
  Eigen::MatrixXd coupling;  // chain coupling matrix

  ModelKind to_kind() const;
};

/// One declarative run: a model, an operation, a sweep, and an output file.
struct Scenario {
  std::string name;
  ModelSpec model;
  std::string operation;
  std::vector<SweepRange> ranges;  // declaration order preserved
  std::vector<std::pair<std::string, double>> fixed;
  std::vector<std::string> coords;
  std::string output;

  // Operation-specific settings.
  std::vector<int> subset;              // purity, bifurcation-scan
  std::string search;                   // track-fit search coordinate
  double bracket_lo = 0.9;              // track-fit bracket
  double bracket_hi = 1.1;
  std::string family = "sin";           // track-fit: sin | sinh
  int n_max = 60;                       // fock truncation
  std::vector<double> q_window = {-6.0, 6.0, 201.0};  // density q grid
  double fd_step = 0.0;                 // curvature step override (0 = default)

  std::string digest;  // canonical config hash input
};

/// Parses a JSON config; unknown keys are rejected with path-to-field
/// diagnostics. Throws ConfigError.
std::vector<Scenario> parse_config(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;  // '#'-prefixed comment lines

  std::string to_string() const;
};

/// Runs one scenario, writes its CSV under out_dir (creating directories),
/// and returns the table. Identical inputs produce byte-identical bodies;
/// grid rows may be computed concurrently but are written in grid order.
CsvTable run_scenario(const Scenario& s, const std::string& out_dir,
                      int threads = 1);

/// 17-significant-digit serialization; parses back to the identical double.
std::string format_cell(double v);

std::uint64_t fnv1a_hash(const std::string& text);

/// Named quick checks of the library's core identities, for `selftest`.
struct SelftestCase {
  std::string name;
  std::function<bool(std::string&)> run;  // fills a failure message
};

std::vector<SelftestCase> selftest_cases();

}  // namespace qgeo

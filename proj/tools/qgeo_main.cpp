#include <cstdlib>
#include <iostream>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "qgeo/scenario.hpp"

namespace {

int cmd_run(const std::string& config_path, std::string out_dir, int threads) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  std::vector<qgeo::Scenario> scenarios;
  try {
    scenarios = qgeo::parse_config(buffer.str());
  } catch (const qgeo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  int failures = 0;
  for (const auto& s : scenarios) {
    try {
      const qgeo::CsvTable table = qgeo::run_scenario(s, out_dir, threads);
      std::cout << s.name << ": " << table.rows.size() << " rows -> "
                << s.output << "\n";
    } catch (const qgeo::ConfigError& e) {
      std::cerr << "config error in scenario '" << s.name << "': " << e.what()
                << "\n";
      return 2;
    } catch (const qgeo::Error& e) {
      std::cerr << "scenario '" << s.name << "' failed: " << e.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_list_models() {
  std::cout
      << "ho     parameters (t, X, W, B); X > 0, W > 0, B > 0\n"
      << "iho    parameters (t, X, W, B); X < 0, W > 0, B > 0\n"
      << "hotdf  parameters (t, A, omega0); omega0^2 e^{2At} - A^2/4 > 0;\n"
      << "       model block takes \"level\" (invariant-state level n >= 0)\n"
      << "chain  parameters (t, X, Y, Z, B1..BN); B_a > 0; model block takes\n"
      << "       \"coupling\" (N x N symmetric, distinct eigenvalues)\n";
  return 0;
}

int cmd_selftest(const std::string& filter) {
  int failed = 0, ran = 0;
  for (const auto& check : qgeo::selftest_cases()) {
    if (!filter.empty() && check.name.find(filter) == std::string::npos)
      continue;
    ++ran;
    std::string msg;
    bool ok = false;
    try {
      ok = check.run(msg);
    } catch (const std::exception& e) {
      msg = e.what();
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << check.name;
    if (!ok && !msg.empty()) std::cout << "  (" << msg << ")";
    std::cout << "\n";
    if (!ok) ++failed;
  }
  if (ran == 0) {
    std::cerr << "no selftest matches filter '" << filter << "'\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qgeo: time-extended quantum geometry of exactly solvable "
               "Gaussian families"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  if (const char* env = std::getenv("QGEO_OUT_DIR")) out_dir = env;
  if (out_dir.empty()) out_dir = ".";
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "Run scenarios from a JSON config");
  run->add_option("config", config_path, "Path to the config file")->required();
  run->add_option("--out-dir", out_dir, "Output directory for CSV files");
  run->add_option("--threads", threads, "Worker threads for grid rows")
      ->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("list-models", "List model kinds");

  std::string filter;
  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the built-in invariant checks");
  selftest->add_option("--filter", filter, "Only run checks whose name "
                                           "contains this substring");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(config_path, out_dir, threads);
  if (list->parsed()) return cmd_list_models();
  if (selftest->parsed()) return cmd_selftest(filter);
  return 2;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "apaths/algebroid.hpp"
#include "apaths/report.hpp"

namespace apaths {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Task {
  CheckAlgebroid,
  IntegratePath,
  Homotopy,
  OracleSuite,
  SymplecticSuite,
  EtaleSuite,
  Convergence,
};

Task task_from_name(const std::string& name);
std::string task_name(Task t);

struct PathSpec {
  Vec x0;
  std::vector<std::string> fiber;  // expressions in t (parsed as x1)
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated run configuration; expressions are parsed eagerly on load.
struct RunConfig {
  Task task = Task::CheckAlgebroid;
  int dim = 0;
  Chart chart;

  std::optional<PoissonBivector> poisson;
  std::optional<std::vector<double>> lie_constants;
  int lie_rank = 0;
  std::string groupoid_name;  // etale model selector

  std::optional<PathSpec> path;
  std::optional<PathSpec> path_b;
  std::string family_kind = "reparam";  // or "linear"

  int n_t = 129;
  int n_eps = 33;
  double tol = 1e-6;
  bool tol_set = false;  // explicit in the config (homotopy default is grid-aware)
  std::uint64_t seed = kDefaultSeed;
  std::vector<int> nt_list;  // convergence task

  std::string report_path;
  std::string csv_path;
  std::string path_out;  // integrate-path serialization target

  std::string config_echo;  // canonical JSON echo for the report
};

RunConfig load_config(const std::string& json_text, Task task);
RunConfig load_config_file(const std::string& path, Task task);

/// Fiber expressions are written in t; the parser only knows x1..xn, so a
/// standalone identifier t is rewritten to x1 before parsing.
std::string rewrite_time_var(const std::string& source);

struct Report {
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  std::string config_echo;
  std::vector<CheckResult> records;
  bool pass = true;
  double wall_ms = 0.0;

  nlohmann::json to_json() const;
};

struct ConvergenceRow {
  int n_t = 0;
  double defect = 0.0;
};

Report run_suite(const RunConfig& cfg);
void emit_report(const Report& r, const std::string& path);
void emit_convergence_table(const std::vector<ConvergenceRow>& rows,
                            const std::string& path);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace apaths

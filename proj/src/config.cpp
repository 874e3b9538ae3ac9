#include "apaths/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace apaths {

using nlohmann::json;

Task task_from_name(const std::string& name) {
  if (name == "check-algebroid") return Task::CheckAlgebroid;
  if (name == "integrate-path") return Task::IntegratePath;
  if (name == "homotopy") return Task::Homotopy;
  if (name == "oracle-suite") return Task::OracleSuite;
  if (name == "symplectic-suite") return Task::SymplecticSuite;
  if (name == "etale-suite") return Task::EtaleSuite;
  if (name == "convergence") return Task::Convergence;
  throw ConfigError("unknown task: " + name);
}

std::string task_name(Task t) {
  switch (t) {
    case Task::CheckAlgebroid: return "check-algebroid";
    case Task::IntegratePath: return "integrate-path";
    case Task::Homotopy: return "homotopy";
    case Task::OracleSuite: return "oracle-suite";
    case Task::SymplecticSuite: return "symplectic-suite";
    case Task::EtaleSuite: return "etale-suite";
    case Task::Convergence: return "convergence";
  }
  throw ConfigError("unknown task enum");
}

namespace {

// Parse an expression field, rewrapping errors with the field name.
Expr parse_field(const std::string& source, int dim, const std::string& field) {
  try {
    return parse_expr(source, dim);
  } catch (const ParseError& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
}

Chart chart_from(const json& doc, int dim) {
  if (!doc.contains("box")) return Chart::box_chart(dim, -2.0, 2.0);
  const json& b = doc.at("box");
  if (b.is_array() && b.size() == 2 && b[0].is_number())
    return Chart::box_chart(dim, b[0].get<double>(), b[1].get<double>());
  if (b.is_array() && static_cast<int>(b.size()) == dim) {
    Chart c;
    c.dim = dim;
    for (const json& axis : b) {
      if (!axis.is_array() || axis.size() != 2)
        throw ConfigError("field 'box': each axis needs [lo, hi]");
      c.box.push_back({axis[0].get<double>(), axis[1].get<double>()});
    }
    return c;
  }
  throw ConfigError("field 'box': expected [lo, hi] or one pair per axis");
}

PoissonBivector poisson_from(const json& entries, const Chart& chart) {
  int dim = chart.dim;
  int npairs = dim * (dim - 1) / 2;
  std::vector<Expr> upper(npairs);  // default-constructed = 0
  for (const json& e : entries) {
    if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("expr"))
      throw ConfigError("field 'poisson': entries need {i, j, expr}");
    int i = e.at("i").get<int>(), j = e.at("j").get<int>();  // 1-based
    if (i < 1 || j < 1 || i >= j || j > dim)
      throw ConfigError("field 'poisson': need 1 <= i < j <= dim, got i=" +
                        std::to_string(i) + ", j=" + std::to_string(j));
    std::string src = e.at("expr").get<std::string>();
    Expr ex = parse_field(src, dim, "poisson[" + std::to_string(i) + "," +
                                        std::to_string(j) + "]");
    int a = i - 1, b = j - 1;
    int idx = a * dim - a * (a + 1) / 2 + (b - a - 1);
    upper[idx] = ex;
  }
  return PoissonBivector(chart, upper);
}

}  // namespace

std::string rewrite_time_var(const std::string& source) {
  std::string out;
  auto word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  for (std::size_t i = 0; i < source.size(); ++i) {
    bool lone_t = source[i] == 't' && (i == 0 || !word(source[i - 1])) &&
                  (i + 1 == source.size() || !word(source[i + 1]));
    if (lone_t)
      out += "x1";
    else
      out += source[i];
  }
  return out;
}

namespace {

PathSpec path_from(const json& p, int rank, const std::string& field) {
  if (!p.is_object() || !p.contains("x0") || !p.contains("fiber"))
    throw ConfigError("field '" + field + "': needs {x0, fiber}");
  PathSpec spec;
  for (const json& v : p.at("x0")) spec.x0.push_back(v.get<double>());
  for (const json& f : p.at("fiber")) {
    std::string src = f.get<std::string>();
    parse_field(rewrite_time_var(src), 1, field + ".fiber");  // eager check
    spec.fiber.push_back(src);
  }
  if (static_cast<int>(spec.fiber.size()) != rank)
    throw ConfigError("field '" + field + "': fiber needs " +
                      std::to_string(rank) + " expressions, got " +
                      std::to_string(spec.fiber.size()));
  return spec;
}

}  // namespace

RunConfig load_config(const std::string& json_text, Task task) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  cfg.task = task;
  if (doc.contains("task")) {
    Task declared = task_from_name(doc.at("task").get<std::string>());
    if (declared != task)
      throw ConfigError("config declares task '" + task_name(declared) +
                        "' but '" + task_name(task) + "' was requested");
  }

  if (!doc.contains("dim")) throw ConfigError("missing required field 'dim'");
  cfg.dim = doc.at("dim").get<int>();
  if (cfg.dim < 0) throw ConfigError("field 'dim': must be >= 0");
  cfg.chart = cfg.dim == 0 ? Chart::point() : chart_from(doc, cfg.dim);

  if (doc.contains("poisson"))
    cfg.poisson = poisson_from(doc.at("poisson"), cfg.chart);

  if (doc.contains("lie")) {
    const json& lie = doc.at("lie");
    if (!lie.contains("rank") || !lie.contains("constants"))
      throw ConfigError("field 'lie': needs {rank, constants}");
    cfg.lie_rank = lie.at("rank").get<int>();
    if (cfg.lie_rank < 1) throw ConfigError("field 'lie.rank': must be >= 1");
    std::vector<double> c;
    for (const json& v : lie.at("constants")) c.push_back(v.get<double>());
    int want = cfg.lie_rank * cfg.lie_rank * cfg.lie_rank;
    if (static_cast<int>(c.size()) != want)
      throw ConfigError("field 'lie.constants': needs rank^3 = " +
                        std::to_string(want) + " values");
    cfg.lie_constants = std::move(c);
  }

  if (doc.contains("groupoid"))
    cfg.groupoid_name = doc.at("groupoid").get<std::string>();

  int rank = cfg.lie_constants ? cfg.lie_rank : cfg.dim;  // cotangent: rank=dim
  if (doc.contains("path")) cfg.path = path_from(doc.at("path"), rank, "path");
  if (doc.contains("path_b"))
    cfg.path_b = path_from(doc.at("path_b"), rank, "path_b");
  if (doc.contains("family")) {
    cfg.family_kind = doc.at("family").get<std::string>();
    if (cfg.family_kind != "reparam" && cfg.family_kind != "linear")
      throw ConfigError("field 'family': expected 'reparam' or 'linear'");
  }

  if (doc.contains("n_t")) cfg.n_t = doc.at("n_t").get<int>();
  if (doc.contains("n_eps")) cfg.n_eps = doc.at("n_eps").get<int>();
  if (cfg.n_t < 3) throw ConfigError("field 'n_t': must be >= 3");
  if (cfg.n_eps < 3) throw ConfigError("field 'n_eps': must be >= 3");
  if (doc.contains("tol")) {
    cfg.tol = doc.at("tol").get<double>();
    cfg.tol_set = true;
  }
  if (cfg.tol <= 0.0) throw ConfigError("field 'tol': must be positive");
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("nt_list"))
    for (const json& v : doc.at("nt_list")) {
      int n = v.get<int>();
      if (n < 3) throw ConfigError("field 'nt_list': entries must be >= 3");
      cfg.nt_list.push_back(n);
    }

  if (doc.contains("report")) cfg.report_path = doc.at("report").get<std::string>();
  if (doc.contains("csv")) cfg.csv_path = doc.at("csv").get<std::string>();
  if (doc.contains("path_out")) cfg.path_out = doc.at("path_out").get<std::string>();

  // Task-specific requirements.
  switch (task) {
    case Task::CheckAlgebroid:
      if (!cfg.poisson && !cfg.lie_constants)
        throw ConfigError("check-algebroid needs 'poisson' or 'lie'");
      break;
    case Task::IntegratePath:
      if (!cfg.poisson) throw ConfigError("integrate-path needs 'poisson'");
      if (!cfg.path) throw ConfigError("integrate-path needs 'path'");
      break;
    case Task::Homotopy:
      if (!cfg.poisson) throw ConfigError("homotopy needs 'poisson'");
      if (!cfg.path) throw ConfigError("homotopy needs 'path'");
      if (cfg.family_kind == "linear" && !cfg.path_b)
        throw ConfigError("homotopy with family='linear' needs 'path_b'");
      break;
    case Task::OracleSuite:
      if (!cfg.poisson) throw ConfigError("oracle-suite needs 'poisson'");
      break;
    case Task::SymplecticSuite:
    case Task::EtaleSuite:
    case Task::Convergence:
      break;
  }

  cfg.config_echo = doc.dump();
  return cfg;
}

RunConfig load_config_file(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), task);
}

json Report::to_json() const {
  json doc;
  doc["version"] = version;
  doc["seed"] = seed;
  doc["config"] = config_echo.empty() ? json::object() : json::parse(config_echo);
  json recs = json::array();
  for (const CheckResult& r : records) {
    json rec;
    rec["name"] = r.name;
    rec["residual"] = r.residual;
    rec["tol"] = r.tol;
    rec["pass"] = r.pass;
    recs.push_back(rec);
  }
  doc["records"] = recs;
  doc["pass"] = pass;
  doc["wall_ms"] = wall_ms;
  return doc;
}

void emit_report(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report: " + path);
  out << r.to_json().dump(2) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string csv = "n_t,defect,order\n";
  char buf[96];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0 && rows[i].defect > 0.0 && rows[i - 1].defect > 0.0)
      order = std::log2(rows[i - 1].defect / rows[i].defect);
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.6g\n", rows[i].n_t,
                  rows[i].defect, order);
    csv += buf;
  }
  return csv;
}

void emit_convergence_table(const std::vector<ConvergenceRow>& rows,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write csv: " + path);
  out << convergence_csv(rows);
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace apaths

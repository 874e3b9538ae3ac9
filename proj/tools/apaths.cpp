#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "apaths/cli.hpp"
#include "apaths/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"A-path homotopy toolkit"};
  app.require_subcommand(1);

  std::string config_path, report_path, csv_path;
  std::uint64_t seed = 0;
  int nt = 0, neps = 0;
  bool seed_set = false;

  const char* tasks[] = {"check-algebroid", "integrate-path", "homotopy",
                         "oracle-suite",    "symplectic-suite", "etale-suite",
                         "convergence"};
  for (const char* t : tasks) {
    CLI::App* sub = app.add_subcommand(t);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--report", report_path, "JSON report output path");
    sub->add_option("--csv", csv_path, "CSV output path (convergence)");
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--nt", nt, "override n_t");
    sub->add_option("--neps", neps, "override n_eps");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    apaths::Task task =
        apaths::task_from_name(app.get_subcommands().front()->get_name());
    apaths::RunConfig cfg = apaths::load_config_file(config_path, task);
    if (seed_set) cfg.seed = seed;
    if (nt > 0) cfg.n_t = nt;
    if (neps > 0) cfg.n_eps = neps;
    if (!report_path.empty()) cfg.report_path = report_path;
    if (!csv_path.empty()) cfg.csv_path = csv_path;

    apaths::Report rep = apaths::run_suite(cfg);
    for (const apaths::CheckResult& r : rep.records)
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                << "  residual=" << r.residual << "  tol=" << r.tol << "\n";
    std::cout << (rep.pass ? "OK" : "FAILED") << " (" << rep.records.size()
              << " checks, " << rep.wall_ms << " ms)\n";

    if (!cfg.report_path.empty()) apaths::emit_report(rep, cfg.report_path);
    return rep.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

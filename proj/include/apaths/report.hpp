#pragma once

#include <string>
#include <vector>

namespace apaths {

/// One named residual check against a tolerance.
struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;

  static CheckResult of(std::string name, double residual, double tol) {
    CheckResult r;
    r.name = std::move(name);
    r.residual = residual;
    r.tol = tol;
    r.pass = residual < tol;
    return r;
  }
};

struct CheckReport {
  std::vector<CheckResult> records;

  void add(CheckResult r) { records.push_back(std::move(r)); }
  void add(std::string name, double residual, double tol) {
    records.push_back(CheckResult::of(std::move(name), residual, tol));
  }
  void merge(const CheckReport& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
  }

  bool pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }

  double max_residual() const {
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.residual);
    return m;
  }
};

}  // namespace apaths

#pragma once

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace dirlab::app {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0: no runtime limit
};

struct AcceptanceOptions {
  std::set<int> only;               // empty: all ten
  std::filesystem::path scratch;    // cache directory for the determinism check; empty: a temp dir
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "[PASS] 4 abscissa recovery: ... (12.3 s)"
std::string format_result(const CriterionResult& r);

}  // namespace dirlab::app

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lavrentiev::cli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria in order. Progress lines go to `log` (may be
/// null); the returned list has one entry per criterion.
std::vector<CriterionResult> run_acceptance(std::ostream* log);

/// "PASS  3  Hoelder family ... (detail) [1.23 s]"
std::string format_result(const CriterionResult& r);

}  // namespace lavrentiev::cli

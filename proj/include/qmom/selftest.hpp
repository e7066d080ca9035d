#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmom {

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  int quad_n = 64;      // quadrature points per circle for the Q_2 fit
  int pmax = 6;
  int threads = 0;
  std::vector<int> only;  // criterion ids to run; empty = all
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  bool gated = true;  // false: reported only
  double seconds = 0;
  std::string detail;
  std::vector<std::string> table;  // extra lines (criterion 11)
};

// Runs the acceptance criteria, writing one PASS/FAIL line each (plus any
// table) to out as it goes.
std::vector<CriterionResult> run_selftest(const SelftestOptions& opts, std::ostream& out);

// True if every gated criterion passed.
bool selftest_ok(const std::vector<CriterionResult>& results);

}  // namespace qmom

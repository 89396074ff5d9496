#pragma once

#include <string>
#include <vector>

namespace optomech {

struct CheckResult {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;  // target value or tolerance, see `kind`
  double deviation = 0.0;
  bool pass = false;
  std::string kind;  // "relative" (scalar target) or "bound" (structural)
};

struct ReproduceOutcome {
  std::string target;
  std::vector<CheckResult> checks;
  std::vector<std::string> files;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Regenerates the data behind a table or figure into out_dir and runs the
// target's scalar or structural checks. Valid targets: table1, table2,
// fig2a, fig2b, fig3a, fig3b, fig4, fig5, fig6.
ReproduceOutcome reproduce(const std::string& target, const std::string& out_dir,
                           int phase_grid_points = 101);

std::vector<std::string> reproduce_targets();

}  // namespace optomech

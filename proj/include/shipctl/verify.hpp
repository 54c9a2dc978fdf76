#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shipctl::verify {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

// Runs the whole verification suite (transform round-trips, model
// equivalence, finite-difference oracles, Lyapunov residuals, the four
// bundled scenarios, PE checks, CLI file contracts), printing one PASS/FAIL
// line per check. cli_path, when non-empty, additionally drives the
// executable end to end (usage errors, a full run writing CSV + SVG).
// Returns the results; the caller derives the exit code.
std::vector<CheckResult> run_all(std::ostream& log, const std::string& cli_path = "");

int failures(const std::vector<CheckResult>& results);

}  // namespace shipctl::verify

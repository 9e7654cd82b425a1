// The toolkit's self-audit: nine fixed criteria spanning the local series
// engine, the expansion coefficients, the half-integral spaces, both lift
// routes, the relation system in degrees 2 and 4, the invariant corpus,
// the operator comparison harness, and artifact determinism.  Each
// criterion runs independently, reports pass/fail with a one-line detail
// and its runtime, and never aborts the suite.
#pragma once

#include <string>
#include <vector>

namespace ml {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  long ms = 0;
  std::string detail;  // summary on success, first failure otherwise
};

struct AcceptanceReport {
  bool all_passed = false;
  std::vector<CriterionResult> criteria;
};

// profile: "full" runs the stated bounds, "quick" halves them.  Any other
// string is a usage error.
AcceptanceReport acceptance_suite(const std::string& profile);

// Fixed-width text rendering of the report (one line per criterion).
std::string render_report(const AcceptanceReport& rep);

}  // namespace ml

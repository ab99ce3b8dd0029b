#pragma once

// Machine-readable verification reports. A report is an ordered list of named
// checks with pass/fail status; serialization is byte-identical across runs
// except for the wall_time_ms fields.

#include <functional>
#include <string>
#include <vector>

namespace f2v {

struct CheckResult {
  std::string id;
  bool passed = false;
  std::string details;       // human-oriented one-liner, stable across runs
  double wall_time_ms = 0.0; // the only nondeterministic field
  // Serialized status. Empty means plain pass/fail; a mathematical outcome
  // (SOLVABLE, OBSTRUCTED) is its own status and `passed` records whether it
  // was the expected one.
  std::string label;
};

struct Report {
  std::vector<CheckResult> checks;

  void add(const std::string& id, bool passed, const std::string& details,
           double wall_time_ms, const std::string& label = "");
  bool all_passed() const;
  size_t failed_count() const;

  // Pretty-printed JSON object {schema_version, tool_version, checks: [...]}.
  std::string to_json() const;
  void write_json(const std::string& path) const;
};

// Runs fn, records its wall time, and converts exceptions into a failed check
// whose details carry the exception message. fn returns {passed, details} and
// optionally a status label.
struct CheckOutcome {
  bool passed = false;
  std::string details;
  std::string label;

  CheckOutcome() = default;
  CheckOutcome(bool p, std::string d, std::string l = "")
      : passed(p), details(std::move(d)), label(std::move(l)) {}
};

void timed_check(Report& report, const std::string& id,
                 const std::function<CheckOutcome()>& fn);

}  // namespace f2v

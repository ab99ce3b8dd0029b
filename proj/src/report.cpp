#include "f2v/report.hpp"

#include <chrono>
#include <exception>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace f2v {

namespace {
constexpr int schema_version = 1;
constexpr const char* tool_version = "1.0.0";
}  // namespace

void Report::add(const std::string& id, bool passed, const std::string& details,
                 double wall_time_ms, const std::string& label) {
  checks.push_back({id, passed, details, wall_time_ms, label});
}

bool Report::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

size_t Report::failed_count() const {
  size_t n = 0;
  for (const auto& c : checks)
    if (!c.passed) ++n;
  return n;
}

std::string Report::to_json() const {
  nlohmann::ordered_json root;
  root["schema_version"] = schema_version;
  root["tool_version"] = tool_version;
  root["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json item;
    item["id"] = c.id;
    item["status"] = c.label.empty() ? (c.passed ? "pass" : "fail") : c.label;
    item["details"] = c.details;
    item["wall_time_ms"] = c.wall_time_ms;
    root["checks"].push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

void Report::write_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report path: " + path);
  out << to_json();
}

void timed_check(Report& report, const std::string& id,
                 const std::function<CheckOutcome()>& fn) {
  auto start = std::chrono::steady_clock::now();
  CheckOutcome outcome;
  try {
    outcome = fn();
  } catch (const std::exception& e) {
    outcome.passed = false;
    outcome.details = std::string("exception: ") + e.what();
  }
  auto stop = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(stop - start).count();
  report.add(id, outcome.passed, outcome.details, ms, outcome.label);
}

}  // namespace f2v

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <iterator>
#include <regex>
#include <string>

#include "f2v/report.hpp"

using namespace f2v;

namespace {

std::string strip_wall_times(const std::string& json) {
  static const std::regex wall(R"("wall_time_ms": [0-9.e+-]+)");
  return std::regex_replace(json, wall, "\"wall_time_ms\": 0");
}

}  // namespace

TEST_CASE("report serializes schema, status, and order") {
  Report r;
  r.add("alpha", true, "fine", 1.5);
  r.add("beta", false, "broke", 2.5);
  std::string json = r.to_json();
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"tool_version\": \"1.0.0\"") != std::string::npos);
  CHECK(json.find("\"id\": \"alpha\"") != std::string::npos);
  CHECK(json.find("\"status\": \"pass\"") != std::string::npos);
  CHECK(json.find("\"status\": \"fail\"") != std::string::npos);
  CHECK(json.find("alpha") < json.find("beta"));
  CHECK(!r.all_passed());
  CHECK(r.failed_count() == 1);
}

TEST_CASE("outcome labels replace pass/fail in the status field") {
  Report r;
  r.add("solver", true, "expected negative result", 1.0, "OBSTRUCTED");
  std::string json = r.to_json();
  CHECK(json.find("\"status\": \"OBSTRUCTED\"") != std::string::npos);
  CHECK(json.find("\"status\": \"pass\"") == std::string::npos);
  CHECK(r.all_passed());
}

TEST_CASE("serialization is deterministic apart from wall times") {
  auto build = [] {
    Report r;
    timed_check(r, "one", [] { return CheckOutcome{true, "ok"}; });
    timed_check(r, "two", [] { return CheckOutcome{false, "nope"}; });
    return r.to_json();
  };
  CHECK(strip_wall_times(build()) == strip_wall_times(build()));
}

TEST_CASE("timed_check converts exceptions into failures") {
  Report r;
  timed_check(r, "boom", []() -> CheckOutcome {
    throw std::runtime_error("exploded");
  });
  REQUIRE(r.checks.size() == 1);
  CHECK(!r.checks[0].passed);
  CHECK(r.checks[0].details == "exception: exploded");
  CHECK(r.failed_count() == 1);
  CHECK(!r.all_passed());
}

TEST_CASE("reports round-trip through files") {
  Report r;
  r.add("disk", true, "written", 0.25);
  std::string path = "report_roundtrip.json";
  r.write_json(path);
  std::ifstream in(path);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body == r.to_json());
}

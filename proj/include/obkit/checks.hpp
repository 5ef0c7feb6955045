#pragma once

// Operation layer behind the command line tool.  Every verb produces a
// report of named checks plus a data payload; the randomized per-module
// suites live behind the same interface.  For a fixed request the report
// is byte-identical across runs (timing is all zeros unless requested).

#include <string>
#include <vector>

#include "json.hpp"

namespace obkit::checks {

using json = nlohmann::json;

struct CheckResult {
  std::string name;
  std::string lemma;
  std::string status;  // "pass" | "fail" | "inapplicable"
  std::string witness;
  long micros = 0;
};

// Sorts the checks by name and assembles {"op", "checks", "data"}.
json make_report(const std::string& op, std::vector<CheckResult> checks,
                 json data);

// All operation names, sorted.
const std::vector<std::string>& operation_names();

// Runs one operation.  Parse, invalid-input, budget, and internal problems
// are thrown as errors; failed checks are reported in place.
json run_op(const std::string& op, const json& request);

// True when some check row carries status "fail".
bool any_failed(const json& report);

// The suite.* implementations (module is "all" or a module name); request
// fields "seed", "samples", and "timing" shape the run.
json run_suite(const std::string& module, const json& request);

}  // namespace obkit::checks

#ifndef QTB_RUNNER_HPP
#define QTB_RUNNER_HPP

#include "serialize.hpp"

namespace qtb {

inline constexpr const char* kSchemaVersion = "1";

struct RunResult {
  json report;         // full JSON report with schema_version + effective config
  std::string csv;     // optional CSV payload (empty when the command has none)
  int exit_code = 0;   // 0 ok, 2 verdict-negative
};

// Each runner takes a config object, applies defaults, and echoes the full
// effective config in the report so reruns are byte-reproducible.
RunResult run_kernel_check(const json& cfg);
RunResult run_transform(const json& cfg);
RunResult run_scaling(const json& cfg);
RunResult run_calderon(const json& cfg);
RunResult run_heat(const json& cfg);
RunResult run_littlewood(const json& cfg);

// Dispatch on cfg["command"].
RunResult run_command(const json& cfg);

// Serialize an Error into the machine-readable error report.
json error_report(const Error& e);

}  // namespace qtb

#endif

#pragma once

#include <string>
#include <vector>

#include "convspec/config.hpp"
#include "json.hpp"

namespace convspec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRequired = 3;
inline constexpr int kExitCap = 4;

// Command-line and environment overrides; each empty/zero field falls back
// to the config value.
struct RunOptions {
    bool fail_fast = false;
    std::string out_override;
    std::vector<int> radii_override;
    std::size_t cap_override = 0;  // ball cap
    bool write_files = true;
};

struct RunResult {
    int exit_code = kExitOk;
    nlohmann::ordered_json report;
    std::vector<std::string> written_files;
    std::vector<std::string> required_failures;
};

// Executes the config's tasks in order, collecting exact results into the
// certificate section and float-bearing results into the heuristic section,
// then writes report.json and CSV series under the output directory.
// Task failures are recorded and the run continues unless fail_fast is set.
RunResult run(const AnalysisConfig& config, const RunOptions& opts = {});

struct BundledExample {
    std::string name;
    std::string description;
    std::string config_text;
};

// Ready-to-run configs covering the library's reference cases.
const std::vector<BundledExample>& bundled_examples();

}  // namespace convspec

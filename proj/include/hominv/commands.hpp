#pragma once

#include "hominv/inverter.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hominv {

inline constexpr const char* kToolVersion = "hominv 1.0.0 (report schema 1)";

/// Process exit codes; a stable contract.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,    ///< usage or parse error
    kExitRefused = 2,  ///< hypotheses failed or not met
    kExitNumerical = 3 ///< continuation or linear-algebra failure
};

struct CommandOptions {
    std::optional<std::size_t> samples; ///< default 10^4 * n
    std::uint64_t seed = 1;
    ContinuationConfig cfg;             ///< cfg.force and cfg.trace mirror --force / --trace
    std::vector<Vector> targets;
    std::optional<int> starts;          ///< default 64 * n
    std::size_t count = 100;            ///< roundtrip target count
};

struct CommandOutcome {
    int exit_code = kExitOk;
    nlohmann::json report;  ///< RunReport
    std::string summary;    ///< human-readable
};

/// Comma-separated reals, e.g. "0,8,0". Throws Error(InvalidInput).
Vector parse_target(std::string_view text);

CommandOutcome run_check(std::string_view map_text, const CommandOptions& opts);
CommandOutcome run_invert(std::string_view map_text, const CommandOptions& opts);
CommandOutcome run_degree(std::string_view map_text, const CommandOptions& opts);
CommandOutcome run_roundtrip(std::string_view map_text, const CommandOptions& opts);

/// Copy of a RunReport without the "timing" member.
nlohmann::json without_timing(nlohmann::json report);

} // namespace hominv

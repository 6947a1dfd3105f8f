#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "didrand/combinatorics.hpp"
#include "didrand/inference.hpp"
#include "didrand/ingest.hpp"
#include "didrand/report.hpp"

namespace didrand::cli {

/// Environment variable that replaces the current directory as the place
/// reports are written when --output is not given.
inline constexpr const char* kOutputDirEnv = "DIDRAND_OUTPUT_DIR";

enum class Command { Test, Enumerate, Space, Audit, Power };

/// Process exit codes. Statistical decisions never change the exit code.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitInput = 3,
    kExitEmptyCell = 4,
    kExitDegenerate = 5,
    kExitSpaceTooLarge = 6,
    kExitDomain = 7,
};

struct RunConfig {
    Command command = Command::Test;

    // Data source: a CSV file or a built-in fixture.
    std::filesystem::path input;
    std::string fixture;
    std::size_t fixture_per_cell = 10;
    double fixture_spread = 0.25;
    ColumnMap columns;
    bool boolean_labels = false;

    RandomizationScheme scheme;
    std::size_t iterations = kDefaultIterations;
    double alpha = 0.05;
    std::uint64_t seed = 20240601;
    std::size_t bins = 50;
    std::filesystem::path output;
    std::size_t workers = 1;
    double cap = kDefaultEnumerationCap;

    // space / audit margins when no input is given.
    std::size_t n = 0;
    std::size_t n_affected = 0;
    std::size_t n_time = 0;
    bool sweep = false;
    bool constant_outcome = false;

    // power design.
    std::size_t cell_n = 20;
    double delta = 0.0;
    double noise_sd = 1.0;
    std::size_t reps = 2000;
};

/// Rejects every invalid configuration before any computation. Throws InvalidArgumentError.
void validate(const RunConfig& config);

/// Where a report for this run is written.
std::filesystem::path report_path(const RunConfig& config);

Report cmd_test(const RunConfig& config, std::ostream& out);
Report cmd_enumerate(const RunConfig& config, std::ostream& out);
PermutationSpaceStats cmd_space(const RunConfig& config, std::ostream& out);
ExactnessAudit cmd_audit(const RunConfig& config, std::ostream& out);

struct PowerRow {
    RandomizationScheme scheme;
    std::size_t rejections = 0;
    std::size_t replications = 0;
    double rate() const { return double(rejections) / double(replications); }
    double standard_error() const;
};

struct PowerTable {
    std::vector<PowerRow> rows; // AffectedOnly first, then Dual
};

PowerTable cmd_power(const RunConfig& config, std::ostream& out);

/// Runs a validated or unvalidated config, mapping errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Exit code for the exception currently being handled.
int exit_code_for_current_exception(std::ostream& err);

} // namespace didrand::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "didrand/combinatorics.hpp"
#include "didrand/inference.hpp"

namespace didrand {

inline constexpr std::string_view kReportSchemaVersion = "didrand.report/1";

/// One histogram bin. Bins are left-closed/right-open except the last, which is closed.
struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Equal-width bins over [min, max] of the values. A distribution with a
/// single distinct value yields one zero-width bin. Throws InvalidArgumentError
/// for an empty distribution or bins == 0.
std::vector<HistogramBin> make_histogram(const NullDistribution& dist, std::size_t bins);

enum class Decision { Rejected, NotRejected };

std::string_view to_string(Decision decision) noexcept;
std::string_view to_string(NullSource source) noexcept;

struct Report {
    std::string dataset_id;
    RandomizationScheme scheme;
    std::size_t iterations = 0;
    std::uint64_t master_seed = 0;
    NullSource source = NullSource::MonteCarlo;
    std::size_t iterations_retained = 0;
    std::size_t degenerate_draws_discarded = 0;
    double observed = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.05;
    Decision decision = Decision::NotRejected;
    double p_raw = 1.0;
    double p_corrected = 1.0;
    std::vector<HistogramBin> histogram;
    /// Absent when a label vector is constant, where the space is trivial.
    std::optional<PermutationSpaceStats> space_stats;

    friend bool operator==(const Report&, const Report&) = default;
};

/// Assembles a report from a finished test.
Report make_report(std::string dataset_id, const PanelSample& sample, const NullDistribution& dist,
                   const TestResult& result, std::size_t bins);

/// JSON document with a fixed field order; doubles use shortest round-trip form.
std::string render_report(const Report& report);
Report parse_report(std::string_view text);

/// Throws IoError naming the path.
void write_report(const Report& report, const std::filesystem::path& path);
Report read_report(const std::filesystem::path& path);

} // namespace didrand

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "didrand/panel.hpp"
#include "didrand/randomizer.hpp"

namespace didrand {

inline constexpr std::size_t kDefaultIterations = 15000;
inline constexpr std::size_t kDefaultMaxAttempts = 1000;
inline constexpr double kDefaultEnumerationCap = 1e7;

enum class NullSource { MonteCarlo, ExactEnumeration };

/// DiD values under a randomization scheme, in canonical order (iteration
/// order for Monte Carlo, lexicographic relabeling order for enumeration).
struct NullDistribution {
    std::vector<double> values;
    std::size_t iterations_requested = 0;
    std::size_t iterations_retained = 0;
    RandomizationScheme scheme;
    std::uint64_t master_seed = 0;
    std::size_t degenerate_draws_discarded = 0;
    NullSource source = NullSource::MonteCarlo;
};

struct TestResult {
    double observed = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.05;
    bool reject = false;
    double p_value = 1.0;
    double p_value_corrected = 1.0;
};

struct PValues {
    double raw = 1.0;
    double corrected = 1.0;
};

struct SimulationOptions {
    /// Worker threads; 0 selects the hardware concurrency.
    std::size_t workers = 1;
    /// Relabelings tried per iteration before giving up on an empty cell.
    std::size_t max_attempts = kDefaultMaxAttempts;
};

struct EnumerationOptions {
    std::size_t workers = 1;
    /// Largest |Omega| that will be enumerated.
    double cap = kDefaultEnumerationCap;
};

/// Monte Carlo null distribution. Iteration k (1-based) draws from
/// SeedSpec{master_seed, k, attempt}; an attempt that empties a cell is
/// discarded and retried with the next attempt index. The result depends only
/// on the arguments, never on `options.workers`.
///
/// Throws InvalidArgumentError for iterations == 0, EmptyCellError when the
/// observed labels are not estimable, TooManyDegenerateDrawsError when an
/// iteration exhausts its attempts.
NullDistribution simulate_null(const PanelSample& sample, const RandomizationScheme& scheme, std::size_t iterations,
                               std::uint64_t master_seed, const SimulationOptions& options = {});

/// Number of relabelings (including inestimable ones) enumerate_null visits,
/// as a natural log.
double log_space_size(const PanelSample& sample, const RandomizationScheme& scheme);

/// Exact null distribution over every relabeling of the scheme. Inestimable
/// relabelings are counted in degenerate_draws_discarded.
/// Throws SpaceTooLargeError when the space exceeds options.cap.
NullDistribution enumerate_null(const PanelSample& sample, const RandomizationScheme& scheme,
                                const EnumerationOptions& options = {});

/// Quantile with linear interpolation between closest ranks: position
/// 1 + q (m - 1) in the sorted values. Throws InvalidArgumentError on empty input.
double empirical_quantile(std::span<const double> values, double q);
double empirical_quantile(const NullDistribution& dist, double q);

/// Fraction of draws with |v| >= |observed|, and the add-one variant
/// (1 + count) / (m + 1).
PValues randomization_p_value(double observed, const NullDistribution& dist);

/// Rejects when observed lies outside the open interval between the alpha/2
/// and 1 - alpha/2 quantiles; equality with a bound rejects.
TestResult test_significance(double observed, const NullDistribution& dist, double alpha);

/// Law of the exact p-value when every relabeling in turn plays the observed one.
struct ExactnessAudit {
    std::size_t n = 0;
    std::size_t n_affected = 0;
    std::size_t n_time = 0;
    RandomizationScheme scheme;
    std::size_t space_size = 0;          // estimable relabelings, |Omega|
    std::size_t degenerate = 0;          // relabelings with an empty cell
    std::vector<std::size_t> extreme_counts; // p = count / space_size, canonical order
    /// For each attained p = c / |Omega| in increasing order: (c, #{p <= c / |Omega|}).
    std::vector<std::pair<std::size_t, std::size_t>> law;
    /// True when #{p <= v} == v |Omega| at every attained v.
    bool exact_at_attained_levels = false;
    /// True when the attained levels are all of {1, ..., |Omega|} / |Omega|.
    bool full_support = false;
    /// max over alpha in {1%, ..., 100%} of P(p <= alpha) - alpha.
    double max_size_violation = 0.0;
    std::size_t worst_alpha_percent = 0;

    double p_value(std::size_t i) const { return double(extreme_counts[i]) / double(space_size); }
};

/// Draws n continuous outcomes from `outcome_seed` (or uses a constant outcome
/// when `constant_outcome` is set), fixes the observed margins and audits the
/// exact p-value law over the full relabeling space.
ExactnessAudit exactness_audit(std::size_t n, std::size_t n_affected, std::size_t n_time,
                               const RandomizationScheme& scheme, std::uint64_t outcome_seed,
                               bool constant_outcome = false, const EnumerationOptions& options = {});

/// Audit of an explicit sample.
ExactnessAudit exactness_audit(const PanelSample& sample, const RandomizationScheme& scheme,
                               const EnumerationOptions& options = {});

} // namespace didrand

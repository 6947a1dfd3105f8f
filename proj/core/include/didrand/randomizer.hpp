#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "didrand/panel.hpp"

namespace didrand {

enum class Margins { AffectedOnly, Dual };
enum class Mode { FixedMargins, Bernoulli };

struct RandomizationScheme {
    Margins margins = Margins::Dual;
    Mode mode = Mode::FixedMargins;

    friend bool operator==(const RandomizationScheme&, const RandomizationScheme&) = default;
};

std::string_view to_string(Margins margins) noexcept;
std::string_view to_string(Mode mode) noexcept;
/// Accepts "affected"/"dual" and "fixed"/"bernoulli". Throws InvalidArgumentError.
Margins parse_margins(std::string_view text);
Mode parse_mode(std::string_view text);

/// Identifies the random stream of one Monte Carlo iteration. `attempt` selects
/// the sub-stream used when an earlier draw of the same iteration was degenerate.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t iteration_index = 0;
    std::uint64_t attempt = 0;
};

/// Which label vector a stream feeds; keeps the two margins independent.
enum class StreamTag : std::uint64_t { Affected = 1, Time = 2, Outcome = 3 };

/// Counter-based generator: the output sequence is a pure function of the
/// (seed spec, tag) key, so iterations can be generated in any order.
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(const SeedSpec& seed, StreamTag tag) noexcept;
    explicit RandomStream(std::uint64_t key) noexcept : state_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;
    /// Uniform integer in [0, bound), unbiased. bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Uniform double in [0, 1) with 53 random bits.
    double unit() noexcept;

private:
    std::uint64_t state_;
};

/// Unbiased Fisher-Yates shuffle in place.
void shuffle_labels(std::span<Label> labels, RandomStream& rng) noexcept;
void fill_bernoulli(std::span<Label> out, double p, RandomStream& rng) noexcept;

/// Uniformly random rearrangement of `labels`; the count of ones is preserved.
LabelVector permute_fixed(std::span<const Label> labels, const SeedSpec& seed);

/// n independent Bernoulli(p) labels. Throws DomainError unless 0 < p < 1 and n >= 1.
LabelVector draw_bernoulli(std::size_t n, double p, const SeedSpec& seed);

/// Relabels per scheme. Outcomes are untouched; time is passed through for
/// AffectedOnly. In Dual mode the two vectors use independent streams.
PanelSample relabel(const PanelSample& sample, const RandomizationScheme& scheme, const SeedSpec& seed);

/// Buffer-reusing relabeler used by the simulation loop. Produces exactly the
/// labels `relabel` would for the same seed spec.
class Relabeler {
public:
    Relabeler(const PanelSample& sample, RandomizationScheme scheme);

    /// Draws labels for `seed` into the internal buffers.
    void draw(const SeedSpec& seed) noexcept;
    std::span<const Label> time() const noexcept { return time_; }
    std::span<const Label> affected() const noexcept { return affected_; }

private:
    const PanelSample* sample_;
    RandomizationScheme scheme_;
    LabelVector time_;
    LabelVector affected_;
};

} // namespace didrand

#include "didrand/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "didrand/combinatorics.hpp"
#include "didrand/errors.hpp"
#include "parallel.hpp"

namespace didrand {

namespace {

// All label vectors of length n, either with a fixed number of ones or
// unconstrained, in lexicographic order.
class ArrangementSpace {
public:
    ArrangementSpace(std::size_t n, std::size_t ones, Mode mode) : n_(n), ones_(ones), mode_(mode) {}

    double log_size() const {
        return mode_ == Mode::FixedMargins ? log_binomial(n_, ones_)
                                           : static_cast<double>(n_) * std::numbers::ln2;
    }

    std::optional<std::uint64_t> size() const {
        if (mode_ == Mode::FixedMargins) return binomial_exact(n_, ones_);
        if (n_ >= 63) return std::nullopt;
        return std::uint64_t{1} << n_;
    }

    void unrank(std::uint64_t rank, std::span<Label> out) const {
        if (mode_ == Mode::Bernoulli) {
            for (std::size_t i = 0; i < n_; ++i) out[i] = Label((rank >> (n_ - 1 - i)) & 1U);
            return;
        }
        std::size_t remaining_ones = ones_;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t rest = n_ - i - 1;
            if (remaining_ones == 0) {
                out[i] = 0;
                continue;
            }
            // Arrangements of the tail that start with a zero here.
            const std::uint64_t with_zero = remaining_ones > rest ? 0 : *binomial_exact(rest, remaining_ones);
            if (rank < with_zero) {
                out[i] = 0;
            } else {
                out[i] = 1;
                rank -= with_zero;
                --remaining_ones;
            }
        }
    }

    /// Next arrangement in order; returns false (and wraps to the first) after the last.
    bool advance(std::span<Label> out) const {
        if (mode_ == Mode::FixedMargins) return std::next_permutation(out.begin(), out.end());
        for (std::size_t i = n_; i-- > 0;) {
            if (out[i] == 0) {
                out[i] = 1;
                return true;
            }
            out[i] = 0;
        }
        return false;
    }

private:
    std::size_t n_;
    std::size_t ones_;
    Mode mode_;
};

struct Space {
    ArrangementSpace affected;
    std::optional<ArrangementSpace> time; // engaged for Dual
    std::uint64_t affected_size = 0;
    std::uint64_t time_size = 1;
    std::uint64_t total = 0;
};

Space make_space(const PanelSample& sample, const RandomizationScheme& scheme, double cap) {
    Space space{ArrangementSpace(sample.size(), sample.affected_ones(), scheme.mode), std::nullopt};
    double log_size = space.affected.log_size();
    if (scheme.margins == Margins::Dual) {
        space.time.emplace(sample.size(), sample.time_ones(), scheme.mode);
        log_size += space.time->log_size();
    }
    const double log_cap = std::log(cap);
    if (log_size > log_cap + 1e-9) throw SpaceTooLargeError(log_size, log_cap);

    const auto a = space.affected.size();
    const auto t = space.time ? space.time->size() : std::optional<std::uint64_t>{1};
    if (!a || !t) throw SpaceTooLargeError(log_size, log_cap);
    space.affected_size = *a;
    space.time_size = *t;
    space.total = *a * *t;
    if (static_cast<double>(space.total) > cap) throw SpaceTooLargeError(log_size, log_cap);
    return space;
}

// Statistic for every relabeling in canonical order; nullopt marks an empty cell.
std::vector<std::optional<double>> enumerate_statistics(const PanelSample& sample, const RandomizationScheme& scheme,
                                                        const EnumerationOptions& options) {
    const Space space = make_space(sample, scheme, options.cap);
    std::vector<std::optional<double>> stats(space.total);
    const std::size_t n = sample.size();

    detail::for_each_block(space.total, options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
        if (begin == end) return;
        LabelVector affected(n);
        LabelVector time(sample.time().begin(), sample.time().end());
        space.affected.unrank(begin / space.time_size, affected);
        std::uint64_t time_rank = begin % space.time_size;
        if (space.time) space.time->unrank(time_rank, time);

        for (std::size_t r = begin; r < end; ++r) {
            if (r != begin) {
                if (space.time) {
                    space.time->advance(time);
                    if (++time_rank == space.time_size) {
                        time_rank = 0;
                        space.affected.advance(affected);
                    }
                } else {
                    space.affected.advance(affected);
                }
            }
            stats[r] = did_value(sample.y(), time, affected);
        }
    });
    return stats;
}

double interpolated_quantile_sorted(std::span<const double> sorted, double q) {
    const std::size_t m = sorted.size();
    const double h = q * static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, m - 1);
    const double w = h - static_cast<double>(lo);
    if (w == 0.0) return sorted[lo];
    return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

void require_non_empty(const NullDistribution& dist) {
    if (dist.values.empty()) throw InvalidArgumentError("null distribution is empty");
}

} // namespace

NullDistribution simulate_null(const PanelSample& sample, const RandomizationScheme& scheme, std::size_t iterations,
                               std::uint64_t master_seed, const SimulationOptions& options) {
    if (iterations == 0) throw InvalidArgumentError("iterations must be at least 1");
    if (options.max_attempts == 0) throw InvalidArgumentError("max_attempts must be at least 1");
    did_from_means(compute_cell_means(sample));

    NullDistribution dist;
    dist.values.assign(iterations, 0.0);
    dist.iterations_requested = iterations;
    dist.scheme = scheme;
    dist.master_seed = master_seed;
    dist.source = NullSource::MonteCarlo;

    const std::size_t workers = detail::resolve_workers(options.workers, iterations);
    std::vector<std::size_t> discarded(workers, 0);
    detail::for_each_block(iterations, workers, [&](std::size_t block, std::size_t begin, std::size_t end) {
        Relabeler relabeler(sample, scheme);
        for (std::size_t k = begin; k < end; ++k) {
            const std::uint64_t iteration = k + 1;
            std::optional<double> value;
            for (std::size_t attempt = 0; attempt < options.max_attempts && !value; ++attempt) {
                relabeler.draw(SeedSpec{master_seed, iteration, attempt});
                value = did_value(sample.y(), relabeler.time(), relabeler.affected());
                if (!value) ++discarded[block];
            }
            if (!value) throw TooManyDegenerateDrawsError(iteration, options.max_attempts);
            dist.values[k] = *value;
        }
    });
    for (auto d : discarded) dist.degenerate_draws_discarded += d;
    dist.iterations_retained = dist.values.size();
    return dist;
}

double log_space_size(const PanelSample& sample, const RandomizationScheme& scheme) {
    double log_size = ArrangementSpace(sample.size(), sample.affected_ones(), scheme.mode).log_size();
    if (scheme.margins == Margins::Dual) {
        log_size += ArrangementSpace(sample.size(), sample.time_ones(), scheme.mode).log_size();
    }
    return log_size;
}

NullDistribution enumerate_null(const PanelSample& sample, const RandomizationScheme& scheme,
                                const EnumerationOptions& options) {
    const auto stats = enumerate_statistics(sample, scheme, options);
    NullDistribution dist;
    dist.values.reserve(stats.size());
    for (const auto& s : stats) {
        if (s) {
            dist.values.push_back(*s);
        } else {
            ++dist.degenerate_draws_discarded;
        }
    }
    dist.iterations_requested = stats.size();
    dist.iterations_retained = dist.values.size();
    dist.scheme = scheme;
    dist.source = NullSource::ExactEnumeration;
    return dist;
}

double empirical_quantile(std::span<const double> values, double q) {
    if (values.empty()) throw InvalidArgumentError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return interpolated_quantile_sorted(sorted, q);
}

double empirical_quantile(const NullDistribution& dist, double q) {
    require_non_empty(dist);
    return empirical_quantile(dist.values, q);
}

PValues randomization_p_value(double observed, const NullDistribution& dist) {
    require_non_empty(dist);
    const double threshold = std::abs(observed);
    const auto count = static_cast<std::size_t>(
        std::count_if(dist.values.begin(), dist.values.end(), [&](double v) { return std::abs(v) >= threshold; }));
    const auto m = static_cast<double>(dist.values.size());
    return PValues{static_cast<double>(count) / m, (1.0 + static_cast<double>(count)) / (m + 1.0)};
}

TestResult test_significance(double observed, const NullDistribution& dist, double alpha) {
    require_non_empty(dist);
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie strictly between 0 and 1");
    std::vector<double> sorted = dist.values;
    std::sort(sorted.begin(), sorted.end());

    TestResult result;
    result.observed = observed;
    result.alpha = alpha;
    result.lower = interpolated_quantile_sorted(sorted, alpha / 2.0);
    result.upper = interpolated_quantile_sorted(sorted, 1.0 - alpha / 2.0);
    result.reject = observed <= result.lower || observed >= result.upper;
    const PValues p = randomization_p_value(observed, dist);
    result.p_value = p.raw;
    result.p_value_corrected = p.corrected;
    return result;
}

ExactnessAudit exactness_audit(const PanelSample& sample, const RandomizationScheme& scheme,
                               const EnumerationOptions& options) {
    const auto stats = enumerate_statistics(sample, scheme, options);

    ExactnessAudit audit;
    audit.n = sample.size();
    audit.n_affected = sample.affected_ones();
    audit.n_time = sample.time_ones();
    audit.scheme = scheme;

    std::vector<double> magnitudes;
    magnitudes.reserve(stats.size());
    for (const auto& s : stats) {
        if (s) {
            magnitudes.push_back(std::abs(*s));
        } else {
            ++audit.degenerate;
        }
    }
    const std::size_t m = magnitudes.size();
    if (m == 0) throw InvalidArgumentError("every relabeling leaves a cell empty; nothing to audit");
    audit.space_size = m;

    std::vector<double> sorted = magnitudes;
    std::sort(sorted.begin(), sorted.end());
    audit.extreme_counts.reserve(m);
    for (double v : magnitudes) {
        const auto below = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
        audit.extreme_counts.push_back(m - below);
    }

    std::vector<std::size_t> counts = audit.extreme_counts;
    std::sort(counts.begin(), counts.end());
    audit.exact_at_attained_levels = true;
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && counts[j] == counts[i]) ++j;
        audit.law.emplace_back(counts[i], j);
        if (j != counts[i]) audit.exact_at_attained_levels = false;
        i = j;
    }
    audit.full_support = audit.law.size() == m;

    audit.max_size_violation = -1.0;
    for (std::size_t percent = 1; percent <= 100; ++percent) {
        // p <= percent/100  <=>  100 c <= percent m, kept in integers.
        const auto hits = static_cast<std::size_t>(std::upper_bound(counts.begin(), counts.end(), percent * m / 100) -
                                                   counts.begin());
        const double violation = static_cast<double>(hits) / static_cast<double>(m) - static_cast<double>(percent) / 100.0;
        if (violation > audit.max_size_violation) {
            audit.max_size_violation = violation;
            audit.worst_alpha_percent = percent;
        }
    }
    return audit;
}

ExactnessAudit exactness_audit(std::size_t n, std::size_t n_affected, std::size_t n_time,
                               const RandomizationScheme& scheme, std::uint64_t outcome_seed, bool constant_outcome,
                               const EnumerationOptions& options) {
    if (n < 4) throw InvalidArgumentError("audit needs n >= 4");
    if (n_affected == 0 || n_affected >= n) throw DomainError("audit needs 0 < n_affected < n");
    if (n_time == 0 || n_time >= n) throw DomainError("audit needs 0 < n_time < n");

    std::vector<double> y(n, 0.0);
    if (!constant_outcome) {
        RandomStream rng(SeedSpec{outcome_seed, 0, 0}, StreamTag::Outcome);
        for (auto& v : y) v = rng.unit();
    }
    LabelVector affected(n, 0);
    LabelVector time(n, 0);
    std::fill_n(affected.begin(), n_affected, Label{1});
    std::fill_n(time.end() - static_cast<std::ptrdiff_t>(n_time), n_time, Label{1});
    return exactness_audit(PanelSample(std::move(y), std::move(time), std::move(affected)), scheme, options);
}

} // namespace didrand

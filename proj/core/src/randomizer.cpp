#include "didrand/randomizer.hpp"

#include <algorithm>

#include "didrand/errors.hpp"

namespace didrand {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_key(const SeedSpec& seed, StreamTag tag) noexcept {
    std::uint64_t k = mix64(seed.master_seed + kGolden);
    k = mix64(k ^ (seed.iteration_index + kGolden * 2));
    k = mix64(k ^ (seed.attempt + kGolden * 3));
    k = mix64(k ^ (static_cast<std::uint64_t>(tag) + kGolden * 4));
    return k;
}

} // namespace

std::string_view to_string(Margins margins) noexcept {
    return margins == Margins::Dual ? "dual" : "affected";
}

std::string_view to_string(Mode mode) noexcept {
    return mode == Mode::Bernoulli ? "bernoulli" : "fixed";
}

Margins parse_margins(std::string_view text) {
    if (text == "dual") return Margins::Dual;
    if (text == "affected") return Margins::AffectedOnly;
    throw InvalidArgumentError("unknown scheme '" + std::string(text) + "' (expected affected|dual)");
}

Mode parse_mode(std::string_view text) {
    if (text == "fixed") return Mode::FixedMargins;
    if (text == "bernoulli") return Mode::Bernoulli;
    throw InvalidArgumentError("unknown mode '" + std::string(text) + "' (expected fixed|bernoulli)");
}

RandomStream::RandomStream(const SeedSpec& seed, StreamTag tag) noexcept : state_(stream_key(seed, tag)) {}

RandomStream::result_type RandomStream::operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

std::uint64_t RandomStream::below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection of the biased low region.
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::unit() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

void shuffle_labels(std::span<Label> labels, RandomStream& rng) noexcept {
    for (std::size_t i = labels.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(labels[i - 1], labels[j]);
    }
}

void fill_bernoulli(std::span<Label> out, double p, RandomStream& rng) noexcept {
    for (auto& v : out) v = rng.unit() < p ? Label{1} : Label{0};
}

LabelVector permute_fixed(std::span<const Label> labels, const SeedSpec& seed) {
    LabelVector out(labels.begin(), labels.end());
    RandomStream rng(seed, StreamTag::Affected);
    shuffle_labels(out, rng);
    return out;
}

LabelVector draw_bernoulli(std::size_t n, double p, const SeedSpec& seed) {
    if (n == 0) throw DomainError("draw_bernoulli: n must be at least 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("draw_bernoulli: p must lie strictly between 0 and 1");
    LabelVector out(n);
    RandomStream rng(seed, StreamTag::Affected);
    fill_bernoulli(out, p, rng);
    return out;
}

Relabeler::Relabeler(const PanelSample& sample, RandomizationScheme scheme)
    : sample_(&sample), scheme_(scheme),
      time_(sample.time().begin(), sample.time().end()),
      affected_(sample.affected().begin(), sample.affected().end()) {}

void Relabeler::draw(const SeedSpec& seed) noexcept {
    const auto draw_one = [&](LabelVector& out, std::span<const Label> original, StreamTag tag) {
        RandomStream rng(seed, tag);
        if (scheme_.mode == Mode::FixedMargins) {
            std::copy(original.begin(), original.end(), out.begin());
            shuffle_labels(out, rng);
        } else {
            fill_bernoulli(out, 0.5, rng);
        }
    };
    draw_one(affected_, sample_->affected(), StreamTag::Affected);
    if (scheme_.margins == Margins::Dual) draw_one(time_, sample_->time(), StreamTag::Time);
}

PanelSample relabel(const PanelSample& sample, const RandomizationScheme& scheme, const SeedSpec& seed) {
    Relabeler relabeler(sample, scheme);
    relabeler.draw(seed);
    return sample.with_labels(LabelVector(relabeler.time().begin(), relabeler.time().end()),
                              LabelVector(relabeler.affected().begin(), relabeler.affected().end()));
}

} // namespace didrand

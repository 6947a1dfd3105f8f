#include "didrand/combinatorics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "didrand/errors.hpp"

namespace didrand {

namespace {

constexpr std::size_t kTableSize = 256;
constexpr std::uint64_t kDirectSumLimit = 64;

const std::array<double, kTableSize>& log_factorial_table() {
    static const auto table = [] {
        std::array<double, kTableSize> t{};
        double acc = 0.0;
        for (std::size_t i = 1; i < kTableSize; ++i) {
            acc += std::log(static_cast<double>(i));
            t[i] = acc;
        }
        return t;
    }();
    return table;
}

} // namespace

double log_factorial(std::uint64_t n) noexcept {
    if (n < kTableSize) return log_factorial_table()[n];
    const double x = static_cast<double>(n);
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/(12x) - 1/(360x^3) + 1/(1260x^5) - 1/(1680x^7)
    const double series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) + series;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw DomainError("log_binomial: k exceeds n");
    if (k > n - k) k = n - k;
    if (k <= kDirectSumLimit) {
        double acc = 0.0;
        for (std::uint64_t i = 1; i <= k; ++i) {
            acc += std::log(static_cast<double>(n - k + i) / static_cast<double>(i));
        }
        return acc;
    }
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

std::optional<std::uint64_t> binomial_exact(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw DomainError("binomial_exact: k exceeds n");
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // acc * (n - k + i) / i is always an integer: it equals C(n - k + i, i).
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    return static_cast<std::uint64_t>(acc);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double stirling_log_binomial(double n, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("stirling_log_binomial: p must lie strictly between 0 and 1");
    if (!(n > 0.0)) throw DomainError("stirling_log_binomial: n must be positive");
    return n * binary_entropy(p) - 0.5 * std::log(2.0 * std::numbers::pi * n * p * (1.0 - p));
}

PermutationSpaceStats space_stats(std::size_t n, std::size_t n_affected, std::size_t n_time) {
    if (n_affected == 0 || n_affected >= n) throw DomainError("space_stats: need 0 < n_affected < n");
    if (n_time == 0 || n_time >= n) throw DomainError("space_stats: need 0 < n_time < n");
    PermutationSpaceStats s;
    s.n = n;
    s.n_affected = n_affected;
    s.n_time = n_time;
    s.p_affected = static_cast<double>(n_affected) / static_cast<double>(n);
    s.p_time = static_cast<double>(n_time) / static_cast<double>(n);
    s.log_size_single = log_binomial(n, n_affected);
    s.log_gain = log_binomial(n, n_time);
    s.log_size_dual = s.log_size_single + s.log_gain;
    s.log_size_bernoulli_dual = 2.0 * static_cast<double>(n) * std::numbers::ln2;
    s.entropy_affected = binary_entropy(s.p_affected);
    s.entropy_time = binary_entropy(s.p_time);
    return s;
}

} // namespace didrand

#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>

namespace didrand {

/// Multiply a value in nats by this to get bits.
inline constexpr double kBitsPerNat = 1.0 / std::numbers::ln2;

/// Sizes of the relabeling spaces for a sample with n rows, n_affected ones in
/// the affected vector and n_time ones in the time vector. Logs are natural.
struct PermutationSpaceStats {
    std::size_t n = 0;
    std::size_t n_affected = 0;
    std::size_t n_time = 0;
    double p_affected = 0.0;
    double p_time = 0.0;
    double log_size_single = 0.0;         // log C(n, n_affected)
    double log_size_dual = 0.0;           // log C(n, n_affected) C(n, n_time)
    double log_gain = 0.0;                // log C(n, n_time)
    double log_size_bernoulli_dual = 0.0; // 2n log 2
    double entropy_affected = 0.0;        // H(p_affected), nats
    double entropy_time = 0.0;            // H(p_time), nats

    friend bool operator==(const PermutationSpaceStats&, const PermutationSpaceStats&) = default;
};

/// log n!, exact summation for small n and the Stirling series beyond.
double log_factorial(std::uint64_t n) noexcept;

/// log C(n, k). Throws DomainError when k > n.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) when it fits in 64 bits, otherwise nullopt. Throws DomainError when k > n.
std::optional<std::uint64_t> binomial_exact(std::uint64_t n, std::uint64_t k);

/// Requires 0 < n_affected < n and 0 < n_time < n.
PermutationSpaceStats space_stats(std::size_t n, std::size_t n_affected, std::size_t n_time);

/// -p log p - (1-p) log(1-p) in nats, with H(0) = H(1) = 0. Throws DomainError outside [0, 1].
double binary_entropy(double p);

/// n H(p) - log(2 pi n p (1-p)) / 2. Throws DomainError unless 0 < p < 1 and n > 0.
double stirling_log_binomial(double n, double p);

} // namespace didrand

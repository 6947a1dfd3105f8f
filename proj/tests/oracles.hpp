#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// estimation, enumeration or combinatorics code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// Four-means DiD written out directly; nullopt on an empty cell.
inline std::optional<double> did(const std::vector<double>& y, const std::vector<int>& time,
                                 const std::vector<int>& affected) {
    double s[2][2] = {{0, 0}, {0, 0}};
    int c[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < y.size(); ++i) {
        s[affected[i]][time[i]] += y[i];
        c[affected[i]][time[i]] += 1;
    }
    for (auto& row : c) {
        for (int v : row) {
            if (v == 0) return std::nullopt;
        }
    }
    return (s[1][1] / c[1][1] - s[1][0] / c[1][0]) - (s[0][1] / c[0][1] - s[0][0] / c[0][0]);
}

/// Every 0/1 vector of length n with `ones` ones, by scanning all 2^n masks.
/// Position 0 is the most significant bit, so the order is lexicographic.
inline std::vector<std::vector<int>> arrangements(int n, int ones) {
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (ones >= 0 && __builtin_popcount(mask) != ones) continue;
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = int((mask >> (n - 1 - i)) & 1U);
        out.push_back(std::move(v));
    }
    return out;
}

/// C(n, k) by the multiplicative formula in 128-bit integers.
inline unsigned __int128 binomial128(unsigned n, unsigned k) {
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (unsigned i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

inline long double log_binomial128(unsigned n, unsigned k) {
    return std::log(static_cast<long double>(binomial128(n, k)));
}

/// Residual sum of squares of the interaction model at given coefficients.
inline double rss(const std::vector<double>& y, const std::vector<int>& t, const std::vector<int>& a,
                  const std::array<double, 4>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - (b[0] + b[1] * t[i] + b[2] * a[i] + b[3] * t[i] * a[i]);
        acc += r * r;
    }
    return acc;
}

/// Least squares by zooming grid search: an 11^4 grid centered on the
/// incumbent, shrinking the step each round.
inline std::array<double, 4> grid_least_squares(const std::vector<double>& y, const std::vector<int>& t,
                                                const std::vector<int>& a, double half_width, int rounds) {
    std::array<double, 4> best{0, 0, 0, 0};
    double step = half_width / 5.0;
    for (int round = 0; round < rounds; ++round) {
        std::array<double, 4> center = best;
        double best_rss = rss(y, t, a, best);
        for (int i0 = -5; i0 <= 5; ++i0)
            for (int i1 = -5; i1 <= 5; ++i1)
                for (int i2 = -5; i2 <= 5; ++i2)
                    for (int i3 = -5; i3 <= 5; ++i3) {
                        const std::array<double, 4> b{center[0] + i0 * step, center[1] + i1 * step,
                                                      center[2] + i2 * step, center[3] + i3 * step};
                        const double r = rss(y, t, a, b);
                        if (r < best_rss) {
                            best_rss = r;
                            best = b;
                        }
                    }
        step /= 2.5;
    }
    return best;
}

/// Exact CDF of a multiset evaluated at x.
inline double ecdf(const std::vector<double>& sorted, double x) {
    return double(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) / double(sorted.size());
}

/// sup_x |F(x) - G(x)| between two empirical CDFs.
inline double sup_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> points = a;
    points.insert(points.end(), b.begin(), b.end());
    double worst = 0.0;
    for (double x : points) worst = std::max(worst, std::abs(ecdf(a, x) - ecdf(b, x)));
    return worst;
}

} // namespace oracle

#include "didrand/panel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "didrand/errors.hpp"

namespace didrand {

namespace {

void validate_labels(std::span<const Label> labels, std::size_t n, const char* name) {
    if (labels.size() != n) {
        std::ostringstream os;
        os << name << " has " << labels.size() << " entries, expected " << n;
        throw InvalidArgumentError(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] > 1) {
            std::ostringstream os;
            os << name << "[" << i << "] = " << int(labels[i]) << " is not binary";
            throw InvalidArgumentError(os.str());
        }
    }
}

// Gaussian elimination with partial pivoting on a 4x4 system.
std::optional<std::array<double, 4>> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
    constexpr int kN = 4;
    for (int col = 0; col < kN; ++col) {
        int pivot = col;
        for (int r = col + 1; r < kN; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (int r = col + 1; r < kN; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < kN; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (int r = kN - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < kN; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

} // namespace

PanelSample::PanelSample(std::vector<double> y, LabelVector time, LabelVector affected)
    : y_(std::move(y)), time_(std::move(time)), affected_(std::move(affected)) {
    if (y_.size() < 4) throw InvalidArgumentError("a panel needs at least 4 observations");
    for (std::size_t i = 0; i < y_.size(); ++i) {
        if (!std::isfinite(y_[i])) {
            std::ostringstream os;
            os << "outcome[" << i << "] is not finite";
            throw InvalidArgumentError(os.str());
        }
    }
    validate_labels(time_, y_.size(), "time");
    validate_labels(affected_, y_.size(), "affected");
}

std::size_t PanelSample::time_ones() const noexcept {
    return static_cast<std::size_t>(std::count(time_.begin(), time_.end(), Label{1}));
}

std::size_t PanelSample::affected_ones() const noexcept {
    return static_cast<std::size_t>(std::count(affected_.begin(), affected_.end(), Label{1}));
}

PanelSample PanelSample::with_labels(LabelVector time, LabelVector affected) const {
    validate_labels(time, y_.size(), "time");
    validate_labels(affected, y_.size(), "affected");
    PanelSample out = *this;
    out.time_ = std::move(time);
    out.affected_ = std::move(affected);
    return out;
}

std::optional<double> CellMeans::mean(int group, int period) const {
    const auto c = count[group][period];
    if (c == 0) return std::nullopt;
    return sum[group][period] / static_cast<double>(c);
}

std::size_t CellMeans::total() const noexcept {
    return count[0][0] + count[0][1] + count[1][0] + count[1][1];
}

bool CellMeans::estimable() const noexcept { return !first_empty().has_value(); }

std::optional<std::pair<int, int>> CellMeans::first_empty() const noexcept {
    for (int g = 0; g < 2; ++g) {
        for (int t = 0; t < 2; ++t) {
            if (count[g][t] == 0) return std::pair{g, t};
        }
    }
    return std::nullopt;
}

CellMeans compute_cell_means(std::span<const double> y, std::span<const Label> time,
                             std::span<const Label> affected) {
    CellMeans cells;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ++cells.count[affected[i]][time[i]];
        cells.sum[affected[i]][time[i]] += y[i];
    }
    return cells;
}

CellMeans compute_cell_means(const PanelSample& sample) {
    return compute_cell_means(sample.y(), sample.time(), sample.affected());
}

DidEstimate did_from_means(const CellMeans& cells) {
    if (auto empty = cells.first_empty()) throw EmptyCellError(empty->first, empty->second);
    const double value = (*cells.mean(1, 1) - *cells.mean(1, 0)) - (*cells.mean(0, 1) - *cells.mean(0, 0));
    return DidEstimate{value, cells, EstimateMethod::FourMeans};
}

std::pair<DidEstimate, OlsFit> did_from_ols(const PanelSample& sample) {
    const CellMeans cells = compute_cell_means(sample);
    if (auto empty = cells.first_empty()) throw EmptyCellError(empty->first, empty->second);

    // Columns: 1, time, affected, time*affected. X'X entries are cell-count sums.
    const auto& c = cells.count;
    const auto& s = cells.sum;
    const double n = static_cast<double>(cells.total());
    const double nt = static_cast<double>(c[0][1] + c[1][1]);
    const double na = static_cast<double>(c[1][0] + c[1][1]);
    const double nta = static_cast<double>(c[1][1]);
    const std::array<std::array<double, 4>, 4> xtx{{
        {n, nt, na, nta},
        {nt, nt, nta, nta},
        {na, nta, na, nta},
        {nta, nta, nta, nta},
    }};
    const std::array<double, 4> xty{
        s[0][0] + s[0][1] + s[1][0] + s[1][1],
        s[0][1] + s[1][1],
        s[1][0] + s[1][1],
        s[1][1],
    };
    const auto coef = solve4(xtx, xty);
    if (!coef) throw EmptyCellError(1, 1);

    OlsFit fit{(*coef)[0], (*coef)[1], (*coef)[2], (*coef)[3], 0.0};
    const auto y = sample.y();
    const auto time = sample.time();
    const auto affected = sample.affected();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double fitted = fit.alpha + fit.beta * time[i] + fit.gamma * affected[i] +
                              fit.delta * (time[i] * affected[i]);
        const double r = y[i] - fitted;
        fit.residual_sum_squares += r * r;
    }
    return {DidEstimate{fit.delta, cells, EstimateMethod::Ols}, fit};
}

std::optional<double> did_value(std::span<const double> y, std::span<const Label> time,
                                std::span<const Label> affected) noexcept {
    std::array<double, 4> sum{};
    std::array<std::size_t, 4> count{};
    for (std::size_t i = 0; i < y.size(); ++i) {
        const unsigned cell = (unsigned(affected[i]) << 1) | unsigned(time[i]);
        sum[cell] += y[i];
        ++count[cell];
    }
    for (auto c : count) {
        if (c == 0) return std::nullopt;
    }
    const auto mean = [&](unsigned cell) { return sum[cell] / static_cast<double>(count[cell]); };
    return (mean(3) - mean(2)) - (mean(1) - mean(0));
}

} // namespace didrand

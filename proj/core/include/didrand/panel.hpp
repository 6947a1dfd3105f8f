#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace didrand {

using Label = std::uint8_t;
using LabelVector = std::vector<Label>;

/// Pooled two-group / two-period sample: one outcome and two binary labels per row.
///
/// Construction validates the shape (equal lengths, n >= 4, labels in {0,1},
/// finite outcomes). Estimability (four non-empty cells) is checked only when a
/// statistic is computed, since relabelings may legitimately empty a cell.
class PanelSample {
public:
    PanelSample(std::vector<double> y, LabelVector time, LabelVector affected);

    std::span<const double> y() const noexcept { return y_; }
    std::span<const Label> time() const noexcept { return time_; }
    std::span<const Label> affected() const noexcept { return affected_; }
    std::size_t size() const noexcept { return y_.size(); }

    std::size_t time_ones() const noexcept;
    std::size_t affected_ones() const noexcept;

    /// Same outcomes, new labels. Labels are validated like the constructor does.
    PanelSample with_labels(LabelVector time, LabelVector affected) const;

    friend bool operator==(const PanelSample&, const PanelSample&) = default;

private:
    std::vector<double> y_;
    LabelVector time_;
    LabelVector affected_;
};

/// Per-cell means and counts, indexed [affected][time].
struct CellMeans {
    std::array<std::array<std::size_t, 2>, 2> count{};
    std::array<std::array<double, 2>, 2> sum{};

    /// Mean of cell (group, period); empty when the cell has no rows.
    std::optional<double> mean(int group, int period) const;
    std::size_t total() const noexcept;
    bool estimable() const noexcept;
    /// First empty cell in (group, period) order, if any.
    std::optional<std::pair<int, int>> first_empty() const noexcept;
};

enum class EstimateMethod { FourMeans, Ols };

struct DidEstimate {
    double value = 0.0;
    CellMeans cells;
    EstimateMethod method = EstimateMethod::FourMeans;
};

/// Coefficients of y = alpha + beta*time + gamma*affected + delta*time*affected + e.
struct OlsFit {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double residual_sum_squares = 0.0;
};

CellMeans compute_cell_means(const PanelSample& sample);
CellMeans compute_cell_means(std::span<const double> y, std::span<const Label> time,
                             std::span<const Label> affected);

/// (mean11 - mean10) - (mean01 - mean00). Throws EmptyCellError.
DidEstimate did_from_means(const CellMeans& cells);

/// Least-squares fit of the saturated interaction model by solving the 4x4
/// normal equations. Throws EmptyCellError when the design is rank deficient.
std::pair<DidEstimate, OlsFit> did_from_ols(const PanelSample& sample);

/// Allocation-free DiD for the relabeling loops; nullopt when a cell is empty.
std::optional<double> did_value(std::span<const double> y, std::span<const Label> time,
                                std::span<const Label> affected) noexcept;

} // namespace didrand

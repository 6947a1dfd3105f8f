#pragma once

#include <array>
#include <span>
#include <string_view>

#include "didrand/panel.hpp"

namespace didrand {

/// Cell means indexed [affected][time].
using CellTable = std::array<std::array<double, 2>, 2>;

struct PublishedBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool rejected = false;
};

/// Published summary of one empirical application: cell means, the DiD value
/// and the 2.5%/97.5% quantile bounds under single and dual randomization.
struct DatasetFixture {
    std::string_view id;
    std::string_view description;
    CellTable means;
    double published_value;
    PublishedBounds affected_only;
    PublishedBounds dual;
};

/// The six outcomes (four datasets) with published cell means.
std::span<const DatasetFixture> dataset_fixtures() noexcept;
/// Throws InvalidArgumentError for an unknown id.
const DatasetFixture& dataset_fixture(std::string_view id);

/// Synthetic panel whose cell means equal `means`: each cell holds
/// `per_cell` rows placed in symmetric pairs mean +/- spread*j (plus the mean
/// itself when per_cell is odd). Rows are ordered cell by cell.
PanelSample make_fixture_sample(const CellTable& means, std::size_t per_cell = 10, double spread = 0.25);

} // namespace didrand

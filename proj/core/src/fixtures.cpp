#include "didrand/fixtures.hpp"

#include <string>

#include "didrand/errors.hpp"

namespace didrand {

namespace {

// Means are [affected][time]: {{control pre, control post}, {treated pre, treated post}}.
constexpr std::array<DatasetFixture, 6> kFixtures{{
    {"inpress", "Indonesia school construction, education outcome",
     {{{9.7327, 8.4759}, {10.1184, 8.9379}}}, 0.076,
     {-0.149, 0.148, false}, {-0.145, 0.146, false}},
    {"ben_jerry", "Ben & Jerry's vs Haagen-Dazs search intensity",
     {{{1.915, 2.055}, {5.681, 10.648}}}, 4.827,
     {-2.949, 2.956, true}, {-2.949, 3.018, true}},
    {"minwage_emptot", "NJ/PA minimum wage, total employment",
     {{{23.3312, 21.1656}, {20.4394, 21.0274}}}, 2.7536,
     {-2.5790, 2.6134, true}, {-2.6269, 2.6010, true}},
    {"minwage_wage_st", "NJ/PA minimum wage, starting wage",
     {{{4.6301, 4.6175}, {4.6121, 5.0808}}}, 0.4814,
     {-0.0854, 0.0852, true}, {-0.1017, 0.1019, true}},
    {"minwage_pmeal", "NJ/PA minimum wage, meal price",
     {{{3.0424, 3.0266}, {3.3511, 3.4148}}}, 0.0794,
     {-0.1855, 0.1793, false}, {-0.1810, 0.1821, false}},
    {"dinas", "Refugee arrivals and far-right vote share, Greece",
     {{{5.0720, 5.6591}, {5.7299, 8.4039}}}, 2.0870,
     {-1.1627, 1.1588, true}, {-1.0490, 1.0407, true}},
}};

} // namespace

std::span<const DatasetFixture> dataset_fixtures() noexcept { return kFixtures; }

const DatasetFixture& dataset_fixture(std::string_view id) {
    for (const auto& f : kFixtures) {
        if (f.id == id) return f;
    }
    throw InvalidArgumentError("unknown dataset fixture '" + std::string(id) + "'");
}

PanelSample make_fixture_sample(const CellTable& means, std::size_t per_cell, double spread) {
    if (per_cell == 0) throw InvalidArgumentError("fixture needs at least one row per cell");
    std::vector<double> y;
    LabelVector time;
    LabelVector affected;
    y.reserve(4 * per_cell);
    for (int g = 0; g < 2; ++g) {
        for (int t = 0; t < 2; ++t) {
            const double mean = means[g][t];
            if (per_cell % 2 == 1) y.push_back(mean);
            for (std::size_t j = 1; j <= per_cell / 2; ++j) {
                y.push_back(mean + spread * static_cast<double>(j));
                y.push_back(mean - spread * static_cast<double>(j));
            }
            time.insert(time.end(), per_cell, Label(t));
            affected.insert(affected.end(), per_cell, Label(g));
        }
    }
    return PanelSample(std::move(y), std::move(time), std::move(affected));
}

} // namespace didrand

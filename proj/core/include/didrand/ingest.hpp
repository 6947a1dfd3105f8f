#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "didrand/panel.hpp"

namespace didrand {

/// CSV header names of the three panel columns.
struct ColumnMap {
    std::string outcome_column = "y";
    std::string time_column = "time";
    std::string affected_column = "affected";
};

struct LoadOptions {
    /// Also accept "true"/"false" as label literals.
    bool allow_boolean_literals = false;
};

/// Parses a comma-separated file whose first row is a header. Labels must be
/// the literals 0 or 1; outcomes must be finite decimal numbers.
///
/// Throws EmptyFileError when there is no header or no data row,
/// MalformedRowError (1-based data row) on any bad row, InvalidArgumentError for
/// a bad column map, IoError when the file cannot be opened.
PanelSample load_panel(const std::filesystem::path& path, const ColumnMap& map, const LoadOptions& options = {});
PanelSample parse_panel(std::istream& in, const ColumnMap& map, const LoadOptions& options = {},
                        const std::string& source = "<stream>");

/// Writes a sample as CSV with the given header names.
void write_panel_csv(const PanelSample& sample, const std::filesystem::path& path, const ColumnMap& map = {});

/// 2x2 table of cell means: rows control/treated, columns pre/post.
std::string summarize(const PanelSample& sample, int precision = 4);

} // namespace didrand

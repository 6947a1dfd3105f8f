#include "didrand/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "didrand/errors.hpp"

namespace didrand {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Splits one CSV line; double quotes may wrap a field and "" escapes a quote.
std::optional<std::vector<std::string>> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) return std::nullopt;
    fields.emplace_back(trim(current));
    return fields;
}

std::optional<Label> parse_label(std::string_view text, const LoadOptions& options) {
    if (text == "0") return Label{0};
    if (text == "1") return Label{1};
    if (options.allow_boolean_literals) {
        if (text == "false") return Label{0};
        if (text == "true") return Label{1};
    }
    return std::nullopt;
}

std::optional<double> parse_outcome(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InvalidArgumentError("column '" + name + "' not found in header");
}

} // namespace

PanelSample parse_panel(std::istream& in, const ColumnMap& map, const LoadOptions& options,
                        const std::string& source) {
    if (map.outcome_column == map.time_column || map.outcome_column == map.affected_column ||
        map.time_column == map.affected_column) {
        throw InvalidArgumentError("outcome, time and affected columns must be distinct");
    }

    std::string line;
    std::optional<std::vector<std::string>> header;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::string_view view = line;
        if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        header = split_csv(view);
        if (!header) throw InvalidArgumentError(source + ": unterminated quote in header");
        break;
    }
    if (!header) throw EmptyFileError(source);

    const std::size_t y_col = column_index(*header, map.outcome_column);
    const std::size_t t_col = column_index(*header, map.time_column);
    const std::size_t a_col = column_index(*header, map.affected_column);

    std::vector<double> y;
    LabelVector time;
    LabelVector affected;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_csv(line);
        if (!fields) throw MalformedRowError(row, "unterminated quote");
        if (fields->size() != header->size()) {
            std::ostringstream os;
            os << "expected " << header->size() << " fields, found " << fields->size();
            throw MalformedRowError(row, os.str());
        }
        const auto value = parse_outcome((*fields)[y_col]);
        if (!value) {
            throw MalformedRowError(row, "outcome '" + (*fields)[y_col] + "' is not a finite number");
        }
        const auto t = parse_label((*fields)[t_col], options);
        if (!t) throw MalformedRowError(row, "time '" + (*fields)[t_col] + "' is not 0 or 1");
        const auto a = parse_label((*fields)[a_col], options);
        if (!a) throw MalformedRowError(row, "affected '" + (*fields)[a_col] + "' is not 0 or 1");
        y.push_back(*value);
        time.push_back(*t);
        affected.push_back(*a);
    }
    if (row == 0) throw EmptyFileError(source);
    return PanelSample(std::move(y), std::move(time), std::move(affected));
}

PanelSample load_panel(const std::filesystem::path& path, const ColumnMap& map, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_panel(in, map, options, path.string());
}

void write_panel_csv(const PanelSample& sample, const std::filesystem::path& path, const ColumnMap& map) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << map.outcome_column << ',' << map.time_column << ',' << map.affected_column << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        out << sample.y()[i] << ',' << int(sample.time()[i]) << ',' << int(sample.affected()[i]) << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

std::string summarize(const PanelSample& sample, int precision) {
    const CellMeans cells = compute_cell_means(sample);
    const auto cell = [&](int g, int t) {
        std::ostringstream os;
        const auto m = cells.mean(g, t);
        if (m) {
            os << std::fixed << std::setprecision(precision) << *m;
        } else {
            os << "-";
        }
        os << " (n=" << cells.count[g][t] << ")";
        return os.str();
    };
    std::ostringstream os;
    os << std::left << std::setw(22) << "" << std::setw(24) << "pre (time=0)" << "post (time=1)" << '\n';
    os << std::setw(22) << "control (affected=0)" << std::setw(24) << cell(0, 0) << cell(0, 1) << '\n';
    os << std::setw(22) << "treated (affected=1)" << std::setw(24) << cell(1, 0) << cell(1, 1) << '\n';
    return os.str();
}

} // namespace didrand

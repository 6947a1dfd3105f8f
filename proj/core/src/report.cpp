#include "didrand/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "didrand/errors.hpp"
#include "json.hpp"

namespace didrand {

namespace {

using Json = nlohmann::ordered_json;

Json stats_to_json(const PermutationSpaceStats& s) {
    Json j;
    j["n"] = s.n;
    j["n_affected"] = s.n_affected;
    j["n_time"] = s.n_time;
    j["p_affected"] = s.p_affected;
    j["p_time"] = s.p_time;
    j["log_size_single"] = s.log_size_single;
    j["log_size_dual"] = s.log_size_dual;
    j["log_gain"] = s.log_gain;
    j["log_size_bernoulli_dual"] = s.log_size_bernoulli_dual;
    j["entropy_affected"] = s.entropy_affected;
    j["entropy_time"] = s.entropy_time;
    return j;
}

PermutationSpaceStats stats_from_json(const Json& j) {
    PermutationSpaceStats s;
    s.n = j.at("n").get<std::size_t>();
    s.n_affected = j.at("n_affected").get<std::size_t>();
    s.n_time = j.at("n_time").get<std::size_t>();
    s.p_affected = j.at("p_affected").get<double>();
    s.p_time = j.at("p_time").get<double>();
    s.log_size_single = j.at("log_size_single").get<double>();
    s.log_size_dual = j.at("log_size_dual").get<double>();
    s.log_gain = j.at("log_gain").get<double>();
    s.log_size_bernoulli_dual = j.at("log_size_bernoulli_dual").get<double>();
    s.entropy_affected = j.at("entropy_affected").get<double>();
    s.entropy_time = j.at("entropy_time").get<double>();
    return s;
}

Decision parse_decision(const std::string& text) {
    if (text == "rejected") return Decision::Rejected;
    if (text == "not_rejected") return Decision::NotRejected;
    throw InvalidArgumentError("unknown decision '" + text + "'");
}

NullSource parse_source(const std::string& text) {
    if (text == "monte_carlo") return NullSource::MonteCarlo;
    if (text == "exact_enumeration") return NullSource::ExactEnumeration;
    throw InvalidArgumentError("unknown source '" + text + "'");
}

} // namespace

std::string_view to_string(Decision decision) noexcept {
    return decision == Decision::Rejected ? "rejected" : "not_rejected";
}

std::string_view to_string(NullSource source) noexcept {
    return source == NullSource::ExactEnumeration ? "exact_enumeration" : "monte_carlo";
}

std::vector<HistogramBin> make_histogram(const NullDistribution& dist, std::size_t bins) {
    if (dist.values.empty()) throw InvalidArgumentError("histogram of an empty distribution");
    if (bins == 0) throw InvalidArgumentError("histogram needs at least one bin");
    const auto [min_it, max_it] = std::minmax_element(dist.values.begin(), dist.values.end());
    const double lo = *min_it;
    const double hi = *max_it;
    if (lo == hi) return {HistogramBin{lo, hi, dist.values.size()}};

    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lower = b == 0 ? lo : lo + width * static_cast<double>(b);
    }
    for (std::size_t b = 0; b + 1 < bins; ++b) out[b].upper = out[b + 1].lower;
    out.back().upper = hi;

    for (double v : dist.values) {
        auto b = static_cast<std::size_t>(std::min((v - lo) / width, static_cast<double>(bins - 1)));
        // Settle rounding at the edges against the published bounds.
        while (b > 0 && v < out[b].lower) --b;
        while (b + 1 < bins && v >= out[b + 1].lower) ++b;
        ++out[b].count;
    }
    return out;
}

Report make_report(std::string dataset_id, const PanelSample& sample, const NullDistribution& dist,
                   const TestResult& result, std::size_t bins) {
    Report r;
    r.dataset_id = std::move(dataset_id);
    r.scheme = dist.scheme;
    r.iterations = dist.iterations_requested;
    r.master_seed = dist.master_seed;
    r.source = dist.source;
    r.iterations_retained = dist.iterations_retained;
    r.degenerate_draws_discarded = dist.degenerate_draws_discarded;
    r.observed = result.observed;
    r.lower = result.lower;
    r.upper = result.upper;
    r.alpha = result.alpha;
    r.decision = result.reject ? Decision::Rejected : Decision::NotRejected;
    r.p_raw = result.p_value;
    r.p_corrected = result.p_value_corrected;
    r.histogram = make_histogram(dist, bins);
    const std::size_t n = sample.size();
    const std::size_t na = sample.affected_ones();
    const std::size_t nt = sample.time_ones();
    if (na > 0 && na < n && nt > 0 && nt < n) r.space_stats = space_stats(n, na, nt);
    return r;
}

std::string render_report(const Report& report) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["dataset_id"] = report.dataset_id;
    j["scheme"] = {{"margins", to_string(report.scheme.margins)}, {"mode", to_string(report.scheme.mode)}};
    j["iterations"] = report.iterations;
    j["master_seed"] = report.master_seed;
    j["source"] = to_string(report.source);
    j["iterations_retained"] = report.iterations_retained;
    j["degenerate_draws_discarded"] = report.degenerate_draws_discarded;
    j["observed"] = report.observed;
    j["lower"] = report.lower;
    j["upper"] = report.upper;
    j["alpha"] = report.alpha;
    j["decision"] = to_string(report.decision);
    j["p_raw"] = report.p_raw;
    j["p_corrected"] = report.p_corrected;
    Json bins = Json::array();
    for (const auto& b : report.histogram) bins.push_back(Json::array({b.lower, b.upper, b.count}));
    j["histogram"] = std::move(bins);
    j["space_stats"] = report.space_stats ? stats_to_json(*report.space_stats) : Json(nullptr);
    return j.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
    try {
        const Json j = Json::parse(text);
        const auto version = j.at("schema_version").get<std::string>();
        if (version != kReportSchemaVersion) throw InvalidArgumentError("unsupported report schema '" + version + "'");
        Report r;
        r.dataset_id = j.at("dataset_id").get<std::string>();
        r.scheme.margins = parse_margins(j.at("scheme").at("margins").get<std::string>());
        r.scheme.mode = parse_mode(j.at("scheme").at("mode").get<std::string>());
        r.iterations = j.at("iterations").get<std::size_t>();
        r.master_seed = j.at("master_seed").get<std::uint64_t>();
        r.source = parse_source(j.at("source").get<std::string>());
        r.iterations_retained = j.at("iterations_retained").get<std::size_t>();
        r.degenerate_draws_discarded = j.at("degenerate_draws_discarded").get<std::size_t>();
        r.observed = j.at("observed").get<double>();
        r.lower = j.at("lower").get<double>();
        r.upper = j.at("upper").get<double>();
        r.alpha = j.at("alpha").get<double>();
        r.decision = parse_decision(j.at("decision").get<std::string>());
        r.p_raw = j.at("p_raw").get<double>();
        r.p_corrected = j.at("p_corrected").get<double>();
        for (const auto& b : j.at("histogram")) {
            r.histogram.push_back(HistogramBin{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<std::size_t>()});
        }
        if (const auto& s = j.at("space_stats"); !s.is_null()) r.space_stats = stats_from_json(s);
        return r;
    } catch (const Json::exception& e) {
        throw InvalidArgumentError(std::string("malformed report: ") + e.what());
    }
}

void write_report(const Report& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open report for writing: " + path.string());
    out << render_report(report);
    if (!out) throw IoError("failed writing report: " + path.string());
}

Report read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open report: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_report(buffer.str());
}

} // namespace didrand

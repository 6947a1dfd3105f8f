#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <random>
#include <utility>

#include "didrand/errors.hpp"
#include "didrand/fixtures.hpp"

namespace didrand::cli {

namespace {

std::string_view command_name(Command c) {
    switch (c) {
    case Command::Test: return "test";
    case Command::Enumerate: return "enumerate";
    case Command::Space: return "space";
    case Command::Audit: return "audit";
    case Command::Power: return "power";
    }
    return "unknown";
}

bool has_data_source(const RunConfig& c) { return !c.input.empty() || !c.fixture.empty(); }

std::pair<std::string, PanelSample> load_input(const RunConfig& config) {
    if (!config.fixture.empty()) {
        const auto& f = dataset_fixture(config.fixture);
        return {std::string(f.id), make_fixture_sample(f.means, config.fixture_per_cell, config.fixture_spread)};
    }
    LoadOptions options;
    options.allow_boolean_literals = config.boolean_labels;
    return {config.input.stem().string(), load_panel(config.input, config.columns, options)};
}

void print_verdict(std::ostream& out, const std::string& id, const Report& r) {
    out << std::setprecision(6) << id << ": DiD = " << r.observed << ", " << (r.alpha * 100.0) << "% bounds ["
        << r.lower << ", " << r.upper << "] over " << r.iterations_retained << " draws -> "
        << to_string(r.decision) << " (p = " << r.p_raw << ", corrected p = " << r.p_corrected << ")\n";
}

std::string scheme_label(const RandomizationScheme& s) {
    return std::string(to_string(s.margins)) + "/" + std::string(to_string(s.mode));
}

} // namespace

double PowerRow::standard_error() const {
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
}

void validate(const RunConfig& c) {
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InvalidArgumentError("--alpha must lie strictly between 0 and 1");
    if (c.iterations == 0) throw InvalidArgumentError("--iterations must be at least 1");
    if (c.bins == 0) throw InvalidArgumentError("--bins must be at least 1");
    if (!(c.cap >= 1.0)) throw InvalidArgumentError("--cap must be at least 1");
    if (!c.input.empty() && !c.fixture.empty()) throw InvalidArgumentError("give either --input or --fixture, not both");
    if (!c.fixture.empty()) {
        dataset_fixture(c.fixture);
        if (c.fixture_per_cell == 0) throw InvalidArgumentError("--per-cell must be at least 1");
        if (!(std::isfinite(c.fixture_spread) && c.fixture_spread >= 0.0)) {
            throw InvalidArgumentError("--spread must be a finite non-negative number");
        }
    }
    const auto& m = c.columns;
    if (m.outcome_column.empty() || m.time_column.empty() || m.affected_column.empty()) {
        throw InvalidArgumentError("column names must be non-empty");
    }
    if (m.outcome_column == m.time_column || m.outcome_column == m.affected_column ||
        m.time_column == m.affected_column) {
        throw InvalidArgumentError("outcome, time and affected columns must be distinct");
    }

    switch (c.command) {
    case Command::Test:
    case Command::Enumerate:
        if (!has_data_source(c)) throw InvalidArgumentError("--input (or --fixture) is required");
        break;
    case Command::Space:
    case Command::Audit:
        if (!has_data_source(c)) {
            if (c.n < 4) throw InvalidArgumentError("--n must be at least 4 when no input is given");
            if (c.n_affected == 0 || c.n_affected >= c.n) throw InvalidArgumentError("--n-affected must lie in (0, n)");
            if (c.n_time == 0 || c.n_time >= c.n) throw InvalidArgumentError("--n-time must lie in (0, n)");
        }
        break;
    case Command::Power:
        if (c.cell_n < 2) throw InvalidArgumentError("--cell-n must be at least 2");
        if (c.reps == 0) throw InvalidArgumentError("--reps must be at least 1");
        if (!(std::isfinite(c.noise_sd) && c.noise_sd > 0.0)) throw InvalidArgumentError("--noise-sd must be positive");
        if (!std::isfinite(c.delta)) throw InvalidArgumentError("--delta must be finite");
        break;
    }
}

std::filesystem::path report_path(const RunConfig& config) {
    if (!config.output.empty()) return config.output;
    std::filesystem::path dir = ".";
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') dir = env;
    return dir / ("didrand-" + std::string(command_name(config.command)) + "-report.json");
}

Report cmd_test(const RunConfig& config, std::ostream& out) {
    validate(config);
    const auto [id, sample] = load_input(config);
    const double observed = did_from_means(compute_cell_means(sample)).value;
    SimulationOptions options;
    options.workers = config.workers;
    const auto dist = simulate_null(sample, config.scheme, config.iterations, config.seed, options);
    const auto result = test_significance(observed, dist, config.alpha);
    Report report = make_report(id, sample, dist, result, config.bins);
    const auto path = report_path(config);
    write_report(report, path);
    print_verdict(out, id, report);
    out << "report written to " << path.string() << '\n';
    return report;
}

Report cmd_enumerate(const RunConfig& config, std::ostream& out) {
    validate(config);
    const auto [id, sample] = load_input(config);
    const double observed = did_from_means(compute_cell_means(sample)).value;
    EnumerationOptions options;
    options.workers = config.workers;
    options.cap = config.cap;
    const auto dist = enumerate_null(sample, config.scheme, options);
    if (dist.values.empty()) throw InvalidArgumentError("every relabeling leaves a cell empty");
    const auto result = test_significance(observed, dist, config.alpha);
    Report report = make_report(id, sample, dist, result, config.bins);
    const auto path = report_path(config);
    write_report(report, path);
    print_verdict(out, id, report);
    out << "visited " << dist.iterations_requested << " relabelings, " << dist.degenerate_draws_discarded
        << " with an empty cell\n";
    out << "report written to " << path.string() << '\n';
    return report;
}

PermutationSpaceStats cmd_space(const RunConfig& config, std::ostream& out) {
    validate(config);
    std::size_t n = config.n;
    std::size_t na = config.n_affected;
    std::size_t nt = config.n_time;
    if (has_data_source(config)) {
        const auto [id, sample] = load_input(config);
        n = sample.size();
        na = sample.affected_ones();
        nt = sample.time_ones();
    }
    const auto s = space_stats(n, na, nt);
    const double stirling_single = stirling_log_binomial(double(n), s.p_affected);
    const double stirling_gain = stirling_log_binomial(double(n), s.p_time);
    const double balanced = 2.0 * double(n) * std::log(2.0) - std::log(2.0 * std::numbers::pi * double(n));

    out << std::fixed << std::setprecision(6);
    out << "n = " << n << ", n_affected = " << na << " (p = " << s.p_affected << "), n_time = " << nt
        << " (p = " << s.p_time << ")\n";
    out << std::left << std::setw(28) << "quantity" << std::setw(18) << "exact (nats)" << std::setw(18)
        << "stirling (nats)" << "abs diff\n";
    const auto row = [&](const char* name, double exact, double approx) {
        out << std::setw(28) << name << std::setw(18) << exact << std::setw(18) << approx << std::abs(exact - approx)
            << '\n';
    };
    row("log |Omega| affected only", s.log_size_single, stirling_single);
    row("log gain C(n, n_time)", s.log_gain, stirling_gain);
    row("log |Omega| dual", s.log_size_dual, stirling_single + stirling_gain);
    out << std::setw(28) << "log |Omega| bernoulli dual" << s.log_size_bernoulli_dual << '\n';
    out << std::setw(28) << "balanced 2n log2 - log 2pin" << balanced << '\n';
    if (const auto gain = binomial_exact(n, nt)) out << std::setw(28) << "gain (exact count)" << *gain << '\n';
    out << std::setw(28) << "H(p_affected)" << s.entropy_affected << "  (" << s.entropy_affected * kBitsPerNat
        << " bits)\n";
    out << std::setw(28) << "H(p_time)" << s.entropy_time << "  (" << s.entropy_time * kBitsPerNat << " bits)\n";
    out << std::setw(28) << "(1/n) log |Omega| dual" << s.log_size_dual / double(n) << "  vs H_A + H_T = "
        << s.entropy_affected + s.entropy_time << '\n';
    if (config.sweep) {
        std::size_t best = 1;
        out << "n_time  log_gain\n";
        for (std::size_t k = 1; k < n; ++k) {
            const double g = log_binomial(n, k);
            out << std::setw(8) << k << g << '\n';
            if (g > log_binomial(n, best)) best = k;
        }
        out << "gain maximized at n_time = " << best << '\n';
    }
    out << std::defaultfloat;
    return s;
}

ExactnessAudit cmd_audit(const RunConfig& config, std::ostream& out) {
    validate(config);
    EnumerationOptions options;
    options.workers = config.workers;
    options.cap = config.cap;
    ExactnessAudit audit;
    if (has_data_source(config)) {
        const auto [id, sample] = load_input(config);
        audit = exactness_audit(sample, config.scheme, options);
    } else {
        audit = exactness_audit(config.n, config.n_affected, config.n_time, config.scheme, config.seed,
                                config.constant_outcome, options);
    }
    out << "scheme " << scheme_label(audit.scheme) << ", n = " << audit.n << ", n_affected = " << audit.n_affected
        << ", n_time = " << audit.n_time << '\n';
    out << "|Omega| = " << audit.space_size << " estimable relabelings (" << audit.degenerate
        << " with an empty cell)\n";
    out << "distinct p-values: " << audit.law.size() << ", full support {1..|Omega|}/|Omega|: "
        << (audit.full_support ? "yes" : "no") << '\n';
    out << "P(p <= v) == v at every attained v: " << (audit.exact_at_attained_levels ? "yes" : "no") << '\n';
    if (audit.space_size <= 64) {
        out << "p-values:";
        for (std::size_t i = 0; i < audit.space_size; ++i) out << ' ' << audit.extreme_counts[i] << '/' << audit.space_size;
        out << '\n';
    }
    out << std::setprecision(6) << "worst-case P(p <= alpha) - alpha over alpha in {0.01, ..., 1.00}: "
        << audit.max_size_violation << " (alpha = " << double(audit.worst_alpha_percent) / 100.0 << ")\n";
    return audit;
}

PowerTable cmd_power(const RunConfig& config, std::ostream& out) {
    validate(config);
    if (config.reps == 1) out << "warning: a single replication gives a 0-or-1 rejection rate\n";

    const std::size_t n = 4 * config.cell_n;
    LabelVector time(n);
    LabelVector affected(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cell = i / config.cell_n;
        affected[i] = Label(cell / 2);
        time[i] = Label(cell % 2);
    }

    PowerTable table;
    table.rows = {PowerRow{{Margins::AffectedOnly, config.scheme.mode}, 0, config.reps},
                  PowerRow{{Margins::Dual, config.scheme.mode}, 0, config.reps}};
    SimulationOptions options;
    options.workers = config.workers;

    std::vector<double> y(n);
    for (std::size_t r = 0; r < config.reps; ++r) {
        RandomStream rng(SeedSpec{config.seed, r, 0}, StreamTag::Outcome);
        std::normal_distribution<double> noise(0.0, config.noise_sd);
        for (std::size_t i = 0; i < n; ++i) y[i] = noise(rng) + config.delta * double(time[i] & affected[i]);
        const PanelSample sample(y, time, affected);
        const double observed = did_from_means(compute_cell_means(sample)).value;
        const std::uint64_t null_seed = rng();
        for (auto& row : table.rows) {
            const auto dist = simulate_null(sample, row.scheme, config.iterations, null_seed, options);
            if (test_significance(observed, dist, config.alpha).reject) ++row.rejections;
        }
    }

    out << "design: " << config.cell_n << " obs/cell, delta = " << config.delta << ", noise sd = " << config.noise_sd
        << ", " << config.reps << " replications, " << config.iterations << " draws each, alpha = " << config.alpha
        << '\n';
    out << std::left << std::setw(20) << "scheme" << std::setw(14) << "rejections" << std::setw(12) << "rate"
        << "std.err\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& row : table.rows) {
        out << std::setw(20) << scheme_label(row.scheme) << std::setw(14) << row.rejections << std::setw(12)
            << row.rate() << row.standard_error() << '\n';
    }
    out << std::defaultfloat;
    return table;
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const SpaceTooLargeError& e) {
        err << "error: " << e.what() << " (try the 'test' command)\n";
        return kExitSpaceTooLarge;
    } catch (const EmptyCellError& e) {
        err << "error: " << e.what() << '\n';
        return kExitEmptyCell;
    } catch (const TooManyDegenerateDrawsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const MalformedRowError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const EmptyFileError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InvalidArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
        case Command::Test: cmd_test(config, out); break;
        case Command::Enumerate: cmd_enumerate(config, out); break;
        case Command::Space: cmd_space(config, out); break;
        case Command::Audit: cmd_audit(config, out); break;
        case Command::Power: cmd_power(config, out); break;
        }
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

} // namespace didrand::cli

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "didrand/errors.hpp"

using didrand::cli::Command;
using didrand::cli::RunConfig;

namespace {

struct SchemeFlags {
    std::string margins = "dual";
    std::string mode = "fixed";
};

void add_data_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--input", c.input, "CSV file with a header row");
    app->add_option("--fixture", c.fixture,
                    "built-in fixture instead of --input (inpress, ben_jerry, minwage_emptot, minwage_wage_st, "
                    "minwage_pmeal, dinas)");
    app->add_option("--per-cell", c.fixture_per_cell, "rows per cell for --fixture")->capture_default_str();
    app->add_option("--spread", c.fixture_spread, "spacing of fixture rows around each cell mean")->capture_default_str();
    app->add_option("--outcome-col", c.columns.outcome_column, "outcome column name")->capture_default_str();
    app->add_option("--time-col", c.columns.time_column, "time indicator column name")->capture_default_str();
    app->add_option("--affected-col", c.columns.affected_column, "affected indicator column name")->capture_default_str();
    app->add_flag("--boolean-labels", c.boolean_labels, "also accept true/false as label values");
}

void add_scheme_flags(CLI::App* app, SchemeFlags& s) {
    app->add_option("--scheme", s.margins, "randomized margins")
        ->check(CLI::IsMember({"affected", "dual"}))
        ->capture_default_str();
    app->add_option("--mode", s.mode, "fixed margins or Bernoulli(1/2) redraws")
        ->check(CLI::IsMember({"fixed", "bernoulli"}))
        ->capture_default_str();
}

void add_run_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--alpha", c.alpha, "significance level")->capture_default_str();
    app->add_option("--seed", c.seed, "master seed")->capture_default_str();
    app->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
}

void add_margin_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--n", c.n, "number of observations");
    app->add_option("--n-affected", c.n_affected, "ones in the affected vector");
    app->add_option("--n-time", c.n_time, "ones in the time vector");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Doubly randomized significance testing for difference-in-differences"};
    app.require_subcommand(1);

    RunConfig config;
    SchemeFlags scheme;

    auto* test = app.add_subcommand("test", "Monte Carlo randomization test");
    add_data_flags(test, config);
    add_scheme_flags(test, scheme);
    add_run_flags(test, config);
    test->add_option("--iterations", config.iterations, "Monte Carlo draws")->capture_default_str();
    test->add_option("--bins", config.bins, "histogram bins")->capture_default_str();
    test->add_option("--output", config.output, "report path");

    auto* enumerate = app.add_subcommand("enumerate", "exact test over the full relabeling space");
    add_data_flags(enumerate, config);
    add_scheme_flags(enumerate, scheme);
    add_run_flags(enumerate, config);
    enumerate->add_option("--bins", config.bins, "histogram bins")->capture_default_str();
    enumerate->add_option("--cap", config.cap, "largest space to enumerate")->capture_default_str();
    enumerate->add_option("--output", config.output, "report path");

    auto* space = app.add_subcommand("space", "relabeling-space sizes, gain and entropy");
    add_data_flags(space, config);
    add_margin_flags(space, config);
    space->add_flag("--sweep", config.sweep, "tabulate the gain for every n_time");

    auto* audit = app.add_subcommand("audit", "exhaustive check of the exact p-value law");
    add_data_flags(audit, config);
    add_margin_flags(audit, config);
    add_scheme_flags(audit, scheme);
    audit->add_option("--seed", config.seed, "seed for the continuous outcomes")->capture_default_str();
    audit->add_option("--workers", config.workers, "worker threads (0 = all cores)")->capture_default_str();
    audit->add_option("--cap", config.cap, "largest space to enumerate")->capture_default_str();
    audit->add_flag("--constant", config.constant_outcome, "use a constant outcome");

    auto* power = app.add_subcommand("power", "rejection rates of single vs dual randomization on synthetic data");
    add_run_flags(power, config);
    power->add_option("--mode", scheme.mode, "fixed margins or Bernoulli(1/2) redraws")
        ->check(CLI::IsMember({"fixed", "bernoulli"}))
        ->capture_default_str();
    power->add_option("--iterations", config.iterations, "Monte Carlo draws per replication")->capture_default_str();
    power->add_option("--cell-n", config.cell_n, "observations per cell")->capture_default_str();
    power->add_option("--delta", config.delta, "true treatment effect")->capture_default_str();
    power->add_option("--noise-sd", config.noise_sd, "noise standard deviation")->capture_default_str();
    power->add_option("--reps", config.reps, "replications")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : didrand::cli::kExitUsage;
    }

    if (test->parsed()) config.command = Command::Test;
    if (enumerate->parsed()) config.command = Command::Enumerate;
    if (space->parsed()) config.command = Command::Space;
    if (audit->parsed()) config.command = Command::Audit;
    if (power->parsed()) config.command = Command::Power;
    config.scheme.margins = didrand::parse_margins(scheme.margins);
    config.scheme.mode = didrand::parse_mode(scheme.mode);

    return didrand::cli::run(config, std::cout, std::cerr);
}

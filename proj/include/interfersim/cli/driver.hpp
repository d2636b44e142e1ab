// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "interfersim/dsl/parse.hpp"
#include "interfersim/experiment/run.hpp"
#include "interfersim/io/writers.hpp"

namespace interfersim {

namespace cli_detail {

inline void print_diagnostics(std::ostream& err, const ParseResult& result,
                              const std::string& filename) {
    for (const auto& d : result.diagnostics) err << d.format(filename) << "\n";
}

/// Writes to the given path, or to `out` when the path is empty.
inline int emit(const std::string& path, std::ostream& out, std::ostream& err,
                const std::string& payload) {
    if (path.empty()) {
        out << payload;
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot write '" << path << "'\n";
        return 1;
    }
    file << payload;
    return 0;
}

struct CommonOptions {
    std::string input;
    std::string format = "csv";
    std::string output;
};

inline void add_common(CLI::App* cmd, CommonOptions& opts, bool with_format = true) {
    cmd->add_option("file", opts.input, "circuit description (.ifx)")->required();
    if (with_format) {
        cmd->add_option("--format", opts.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--output", opts.output, "write results to a file instead of stdout");
    }
}

}  // namespace cli_detail

/// Entry point shared by the `interfersim` binary and the in-process tests.
/// Exit codes: 0 success, 1 validation or runtime errors, 2 usage errors.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using cli_detail::CommonOptions;

    CLI::App app{"exact simulator for few-fermion interferometry experiments", "interfersim"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    uint64_t shots = 0;
    uint64_t seed = 1;
    auto* run_cmd = app.add_subcommand(
        "run", "compute the exact outcome distribution (or sampled counts with --shots)");
    cli_detail::add_common(run_cmd, run_opts);
    run_cmd->add_option("--shots", shots, "sample this many shots instead of exact output");
    run_cmd->add_option("--seed", seed, "random seed for --shots");

    CommonOptions sweep_opts;
    std::string param = "theta1";
    double from = 0.0;
    double to = 0.0;
    uint64_t steps = 0;
    std::string condition_text;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "run the experiment over a grid of phase values");
    cli_detail::add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--param", param, "which phase statement to sweep")
        ->check(CLI::IsMember({"theta1", "theta2"}))
        ->required();
    sweep_cmd->add_option("--from", from, "first grid value (radians)")->required();
    sweep_cmd->add_option("--to", to, "last grid value (radians)")->required();
    sweep_cmd->add_option("--steps", steps, "number of grid points")
        ->check(CLI::PositiveNumber)
        ->required();
    sweep_cmd->add_option("--condition", condition_text,
                          "post-select on a click/readout pattern, e.g. \"C\" or \"C,D,minus\"");

    CommonOptions compare_opts;
    auto* compare_cmd = app.add_subcommand(
        "compare",
        "total-variation distance between collapse-at-click and unitary-deferred statistics");
    cli_detail::add_common(compare_cmd, compare_opts);

    CommonOptions check_opts;
    auto* check_cmd = app.add_subcommand("check", "validate a circuit file and print diagnostics");
    cli_detail::add_common(check_cmd, check_opts, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const auto load = [&](const std::string& path,
                          bool print_all) -> std::optional<ExperimentGraph> {
        auto result = parse_file(path);
        if (!result.ok() || print_all) {
            cli_detail::print_diagnostics(err, result, path);
        }
        return result.graph;
    };

    try {
        if (run_cmd->parsed()) {
            auto graph = load(run_opts.input, false);
            if (!graph) return 1;
            auto dist = run(*graph);
            std::ostringstream payload;
            if (shots == 0) {
                if (run_opts.format == "csv") {
                    write_distribution_csv(payload, dist);
                } else {
                    payload << distribution_to_json(*graph, dist).dump(2) << "\n";
                }
            } else {
                auto counts = sample(dist, shots, seed);
                if (run_opts.format == "csv") {
                    write_counts_csv(payload, dist, counts);
                } else {
                    payload << counts_to_json(*graph, dist, counts, shots, seed).dump(2) << "\n";
                }
            }
            return cli_detail::emit(run_opts.output, out, err, payload.str());
        }

        if (sweep_cmd->parsed()) {
            auto graph = load(sweep_opts.input, false);
            if (!graph) return 1;
            SweepConfig config;
            config.param = param == "theta1" ? SweepParam::Theta1 : SweepParam::Theta2;
            config.condition = Condition::parse(condition_text);
            config.grid.resize(steps);
            for (uint64_t i = 0; i < steps; ++i) {
                config.grid[i] =
                    steps == 1
                        ? from
                        : from + (to - from) * static_cast<double>(i) /
                              static_cast<double>(steps - 1);
            }
            auto table = sweep(*graph, config);
            std::ostringstream payload;
            if (sweep_opts.format == "csv") {
                write_table_csv(payload, table);
            } else {
                payload << table_to_json(*graph, table).dump(2) << "\n";
            }
            return cli_detail::emit(sweep_opts.output, out, err, payload.str());
        }

        if (compare_cmd->parsed()) {
            auto graph = load(compare_opts.input, false);
            if (!graph) return 1;
            const double distance = compare_models(*graph);
            std::ostringstream payload;
            if (compare_opts.format == "csv") {
                payload << format_double(distance) << "\n";
            } else {
                payload << compare_to_json(*graph, distance).dump(2) << "\n";
            }
            return cli_detail::emit(compare_opts.output, out, err, payload.str());
        }

        // check
        auto result = parse_file(check_opts.input);
        cli_detail::print_diagnostics(err, result, check_opts.input);
        return result.ok() ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace interfersim

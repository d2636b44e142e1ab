// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "interfersim/dsl/render.hpp"
#include "interfersim/experiment/condition.hpp"
#include "interfersim/experiment/graph.hpp"
#include "interfersim/version.hpp"

namespace interfersim {

namespace detail {

inline void require_valid(const ExperimentGraph& g) {
    for (const auto& d : g.validate()) {
        if (d.severity == Severity::Error) {
            throw std::invalid_argument("invalid experiment graph: " + d.message);
        }
    }
}

}  // namespace detail

/// Exact joint outcome distribution of the experiment, computed with the
/// collapse-at-click pipeline (the narrative ordering of the protocol).
inline OutcomeDistribution run(const ExperimentGraph& g) {
    detail::require_valid(g);
    const auto space = g.space();
    return run_collapse_pipeline(g.initial_state(space), g.compile_events(space));
}

/// State after all unitaries and detector interactions, before any click or
/// readout is processed.
inline StateVector pre_detection_state(const ExperimentGraph& g) {
    detail::require_valid(g);
    const auto space = g.space();
    StateVector s = g.initial_state(space).normalized();
    for (const auto& ev : detail::sorted_events(g.compile_events(space))) {
        if (const auto* t = std::get_if<ModeTransform>(&ev.action)) {
            s = apply_mode_transform(s, *t);
        } else if (const auto* sc = std::get_if<ScatterEvent>(&ev.action)) {
            s = scatter_entangle(s, sc->detector);
        }
    }
    return s;
}

/// Conditional distribution given the predicate; post states are untouched.
inline OutcomeDistribution post_select(
    const OutcomeDistribution& dist, const std::function<bool(const ClickPattern&)>& predicate) {
    std::vector<OutcomeEntry> kept;
    double total = 0.0;
    for (const auto& e : dist.entries()) {
        if (predicate(e.pattern)) {
            kept.push_back(e);
            total += e.probability;
        }
    }
    if (total <= 0.0) {
        throw std::invalid_argument("post-selection condition has zero probability");
    }
    for (auto& e : kept) e.probability /= total;
    return OutcomeDistribution::make(dist.schema_ptr(), std::move(kept));
}

/// Total-variation distance between the collapse-at-click distribution and
/// the unitary-deferred one for the same experiment.
inline double compare_models(const ExperimentGraph& g) {
    detail::require_valid(g);
    const auto space = g.space();
    const auto initial = g.initial_state(space);
    const auto events = g.compile_events(space);
    return total_variation(run_collapse_pipeline(initial, events),
                           run_unitary_pipeline(initial, events));
}

/// Multinomial counts per distribution entry, reproducible for a fixed seed
/// (the generator-to-uniform mapping is pinned, not implementation-defined).
inline std::vector<uint64_t> sample(const OutcomeDistribution& dist, uint64_t shots,
                                    uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample needs at least one shot");
    std::vector<double> cumulative;
    cumulative.reserve(dist.entries().size());
    double acc = 0.0;
    for (const auto& e : dist.entries()) {
        acc += e.probability;
        cumulative.push_back(acc);
    }
    std::vector<uint64_t> counts(dist.entries().size(), 0);
    std::mt19937_64 rng(seed);
    for (uint64_t shot = 0; shot < shots; ++shot) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        size_t idx = 0;
        while (idx + 1 < cumulative.size() && u >= cumulative[idx]) ++idx;
        ++counts[idx];
    }
    return counts;
}

/// Fringe contrast (max - min) / (max + min) of a probability column.
inline double visibility(std::span<const double> column) {
    if (column.empty()) throw std::invalid_argument("visibility of an empty column");
    double lo = column[0];
    double hi = column[0];
    for (const double v : column) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi + lo <= 0.0) throw std::invalid_argument("visibility undefined for an all-zero column");
    return (hi - lo) / (hi + lo);
}

enum class SweepParam { Theta1, Theta2 };

struct SweepConfig {
    SweepParam param = SweepParam::Theta1;
    std::vector<double> grid;
    Condition condition;
    unsigned threads = 0;  // 0: INTERFERSIM_THREADS, else hardware concurrency
};

struct ResultTable {
    std::string param_name;
    std::vector<double> thetas;
    std::vector<std::string> columns;          // header cores, e.g. "D_given_C"
    std::vector<std::vector<double>> values;   // values[row][column]
    std::string graph_hash;
    std::string convention{kConventionId};
    std::string version{kVersion};
    std::string condition_text;
};

/// Copy of the graph with the k-th phase statement (declaration order) set
/// to theta; theta1/theta2 of the shipped experiments are phases 0 and 1.
inline ExperimentGraph with_phase(ExperimentGraph g, size_t phase_index, double theta) {
    size_t seen = 0;
    for (auto& element : g.elements) {
        if (auto* ph = std::get_if<PhaseDecl>(&element)) {
            if (seen++ == phase_index) {
                ph->theta = theta;
                return g;
            }
        }
    }
    throw std::invalid_argument("experiment has no phase element for the swept parameter");
}

namespace detail {

inline unsigned resolve_thread_cap(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("INTERFERSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

}  // namespace detail

/// One exact run per grid point (grid points evaluated concurrently, output
/// ordering fixed by grid index), post-selected on the condition when one is
/// given. Columns are the union of observed patterns in canonical order.
inline ResultTable sweep(const ExperimentGraph& base, const SweepConfig& config) {
    if (config.grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
    detail::require_valid(base);
    const size_t phase_index = config.param == SweepParam::Theta1 ? 0 : 1;
    const uint32_t particles = base.particle_count();

    const size_t n = config.grid.size();
    std::vector<std::optional<OutcomeDistribution>> dists(n);
    std::vector<std::exception_ptr> failures(n);

    const auto evaluate = [&](size_t i) {
        try {
            auto dist = run(with_phase(base, phase_index, config.grid[i]));
            if (!config.condition.empty()) {
                dist = post_select(dist, config.condition.matcher(dist.schema(), particles));
            }
            dists[i] = std::move(dist);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<size_t>(detail::resolve_thread_cap(config.threads), n));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) evaluate(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (size_t i = w; i < n; i += workers) evaluate(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    // union of patterns across the grid, canonical order
    std::map<std::vector<Outcome>, std::string> column_keys;
    for (const auto& dist : dists) {
        const auto skip = config.condition.required_clicks(dist->schema());
        for (const auto& e : dist->entries()) {
            if (column_keys.count(e.pattern.outcomes())) continue;
            std::string core = e.pattern.render_stripped(skip);
            std::string label;
            if (config.condition.empty()) {
                label = core;
            } else if (core == "0") {
                label = "given_" + config.condition.suffix();
            } else {
                label = core + "_given_" + config.condition.suffix();
            }
            column_keys.emplace(e.pattern.outcomes(), std::move(label));
        }
    }

    ResultTable table;
    table.param_name = config.param == SweepParam::Theta1 ? "theta1" : "theta2";
    table.thetas = config.grid;
    table.graph_hash = graph_hash_hex(base);
    table.condition_text = config.condition.text();
    for (const auto& [key, label] : column_keys) table.columns.push_back(label);
    table.values.resize(n);
    for (size_t i = 0; i < n; ++i) {
        table.values[i].reserve(column_keys.size());
        for (const auto& [key, label] : column_keys) {
            const auto* entry = dists[i]->find_pattern(key);
            table.values[i].push_back(entry ? entry->probability : 0.0);
        }
    }
    return table;
}

}  // namespace interfersim

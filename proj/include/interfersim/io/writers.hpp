// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "interfersim/dsl/render.hpp"
#include "interfersim/experiment/run.hpp"
#include "interfersim/measure/outcome.hpp"

namespace interfersim {

/// Fixed 15-significant-digit decimal form; the CSV determinism contract.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::string(buf);
}

using Json = nlohmann::ordered_json;

inline Json make_meta(const ExperimentGraph& g, const std::string& command) {
    Json meta;
    meta["graphHash"] = graph_hash_hex(g);
    meta["convention"] = std::string(kConventionId);
    meta["version"] = std::string(kVersion);
    meta["command"] = command;
    return meta;
}

inline void write_distribution_csv(std::ostream& out, const OutcomeDistribution& dist) {
    out << "pattern,probability\n";
    for (const auto& e : dist.entries()) {
        out << e.pattern.render() << "," << format_double(e.probability) << "\n";
    }
}

inline void write_counts_csv(std::ostream& out, const OutcomeDistribution& dist,
                             const std::vector<uint64_t>& counts) {
    out << "pattern,count\n";
    for (size_t i = 0; i < dist.entries().size(); ++i) {
        out << dist.entries()[i].pattern.render() << "," << counts[i] << "\n";
    }
}

inline Json distribution_to_json(const ExperimentGraph& g, const OutcomeDistribution& dist) {
    Json doc;
    doc["meta"] = make_meta(g, "run");
    doc["rows"] = Json::array();
    for (const auto& e : dist.entries()) {
        doc["rows"].push_back(Json{{"pattern", e.pattern.render()},
                                   {"probability", e.probability}});
    }
    return doc;
}

inline Json counts_to_json(const ExperimentGraph& g, const OutcomeDistribution& dist,
                           const std::vector<uint64_t>& counts, uint64_t shots, uint64_t seed) {
    Json doc;
    doc["meta"] = make_meta(g, "run");
    doc["meta"]["shots"] = shots;
    doc["meta"]["seed"] = seed;
    doc["rows"] = Json::array();
    for (size_t i = 0; i < dist.entries().size(); ++i) {
        doc["rows"].push_back(
            Json{{"pattern", dist.entries()[i].pattern.render()}, {"count", counts[i]}});
    }
    return doc;
}

inline void write_table_csv(std::ostream& out, const ResultTable& table) {
    out << "theta";
    for (const auto& column : table.columns) out << ",p_" << column;
    out << "\n";
    for (size_t i = 0; i < table.thetas.size(); ++i) {
        out << format_double(table.thetas[i]);
        for (const double v : table.values[i]) out << "," << format_double(v);
        out << "\n";
    }
}

inline Json table_to_json(const ExperimentGraph& g, const ResultTable& table) {
    Json doc;
    doc["meta"] = make_meta(g, "sweep");
    doc["meta"]["param"] = table.param_name;
    if (!table.condition_text.empty()) doc["meta"]["condition"] = table.condition_text;
    doc["rows"] = Json::array();
    for (size_t i = 0; i < table.thetas.size(); ++i) {
        Json values = Json::object();
        for (size_t j = 0; j < table.columns.size(); ++j) {
            values[table.columns[j]] = table.values[i][j];
        }
        doc["rows"].push_back(Json{{"theta", table.thetas[i]}, {"values", std::move(values)}});
    }
    return doc;
}

inline Json compare_to_json(const ExperimentGraph& g, double distance) {
    Json doc;
    doc["meta"] = make_meta(g, "compare");
    doc["rows"] = Json::array({Json{{"tv_distance", distance}}});
    return doc;
}

}  // namespace interfersim

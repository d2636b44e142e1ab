// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <string>

#include "interfersim/experiment/graph.hpp"

namespace interfersim {

namespace detail {

/// Shortest decimal form that parses back to the same double.
inline std::string shortest_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace detail

/// Canonical circuit text for a graph; parse(render(g)) reproduces g.
inline std::string render(const ExperimentGraph& g) {
    std::string out;
    for (const auto& m : g.modes) out += "mode " + m.label + "\n";
    for (const auto& a : g.ancillas) {
        out += "ancilla " + a.label + " overlap " + detail::shortest_double(a.overlap) + "\n";
    }
    for (const auto& s : g.sources) out += "source " + s.label + " -> " + s.mode + "\n";
    for (const auto& element : g.elements) {
        if (const auto* bs = std::get_if<BeamSplitterDecl>(&element)) {
            out += "beamsplitter " + bs->label + " in " + bs->in_a + " " + bs->in_b + " out " +
                   bs->out_a + " " + bs->out_b + " time " + std::to_string(bs->time) + "\n";
        } else {
            const auto& ph = std::get<PhaseDecl>(element);
            out += "phase " + ph.mode + " " + detail::shortest_double(ph.theta) + " time " +
                   std::to_string(ph.time) + "\n";
        }
    }
    for (const auto& nd : g.ndetectors) {
        out += "ndetector " + nd.label + " on " + nd.mode + " ancilla " + nd.ancilla +
               " interact " + std::to_string(nd.interact_time) + " readout " +
               std::to_string(nd.readout_time) + " basis " +
               (nd.basis == ReadoutBasis::Computational ? "computational" : "plusminus") + "\n";
    }
    for (const auto& d : g.adetectors) {
        out += "detector " + d.label + " on " + d.mode + " time " + std::to_string(d.click_time) +
               "\n";
    }
    return out;
}

inline uint64_t graph_hash(const ExperimentGraph& g) {
    // FNV-1a over the canonical text
    uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : render(g)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string graph_hash_hex(const ExperimentGraph& g) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = graph_hash(g);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace interfersim

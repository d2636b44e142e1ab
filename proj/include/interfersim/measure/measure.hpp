// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "interfersim/measure/outcome.hpp"

namespace interfersim {

enum class ReadoutBasis : uint8_t { Computational, PlusMinusJoint };

/// Projective occupation measurement followed by absorption of the particle.
struct AbsorbingDetector {
    std::string label;
    ModeId mode{};
    int64_t click_time = 0;
};

/// Records passage by rotating a two-level ancilla when its mode is occupied
/// (the quantum step, at interaction_time); the classical record is read out
/// later (readout_time) in the declared basis.
struct NonAbsorbingDetector {
    std::string label;
    ModeId mode{};
    AncillaId ancilla{};
    int64_t interaction_time = 0;
    int64_t readout_time = 0;
    ReadoutBasis basis = ReadoutBasis::Computational;
};

namespace detail {

/// Unnormalized restriction to configs where the mode is occupied (bit set)
/// or empty.
inline StateVector restrict_occupation(const StateVector& s, ModeId mode, bool occupied) {
    const uint64_t bit = uint64_t{1} << mode.value;
    StateVector out(s.space_ptr());
    for (const auto& [c, a] : s.amplitudes()) {
        if (bool(c.mode_bits & bit) == occupied) out.add_term(c, a);
    }
    return out;
}

inline StateVector restrict_ancilla_bit(const StateVector& s, AncillaId anc, bool set) {
    const uint64_t bit = uint64_t{1} << anc.value;
    StateVector out(s.space_ptr());
    for (const auto& [c, a] : s.amplitudes()) {
        if (bool(c.ancilla_bits & bit) == set) out.add_term(c, a);
    }
    return out;
}

struct PlusMinusParts {
    StateVector plus;
    StateVector minus;
    StateVector rest;  // component with 0 or 2 scattered records
};

/// Projections onto chi+- = (|01> +- |10>)/sqrt(2) of the (first, second)
/// ancilla pair, and onto the orthogonal complement span{|00>, |11>}.
inline PlusMinusParts plus_minus_projections(const StateVector& s, AncillaId first,
                                             AncillaId second) {
    const uint64_t bit_a = uint64_t{1} << first.value;
    const uint64_t bit_b = uint64_t{1} << second.value;
    const double r = 1.0 / std::sqrt(2.0);
    PlusMinusParts parts{StateVector(s.space_ptr()), StateVector(s.space_ptr()),
                         StateVector(s.space_ptr())};
    for (const auto& [c, a] : s.amplitudes()) {
        const bool sa = c.ancilla_bits & bit_a;
        const bool sb = c.ancilla_bits & bit_b;
        if (sa == sb) {
            parts.rest.add_term(c, a);
            continue;
        }
        // overlap of this config with chi+- times the remaining basis vector
        const BasisConfig c01{c.mode_bits, (c.ancilla_bits & ~bit_a) | bit_b};
        const BasisConfig c10{c.mode_bits, (c.ancilla_bits | bit_a) & ~bit_b};
        const double sign_minus = (!sa && sb) ? 1.0 : -1.0;  // <chi-|c>: +r for |01>, -r for |10>
        const Amplitude wp = a * r;
        parts.plus.add_term(c01, wp * r);
        parts.plus.add_term(c10, wp * r);
        const Amplitude wm = a * r * sign_minus;
        parts.minus.add_term(c01, wm * r);
        parts.minus.add_term(c10, wm * (-r));
    }
    parts.plus.prune_in_place(kPruneThreshold);
    parts.minus.prune_in_place(kPruneThreshold);
    parts.rest.prune_in_place(kPruneThreshold);
    return parts;
}

inline void validate_absorbing_set(const StateVector& s,
                                   const std::vector<AbsorbingDetector>& detectors) {
    for (size_t i = 0; i < detectors.size(); ++i) {
        s.space().require_mode(detectors[i].mode);
        for (size_t j = i + 1; j < detectors.size(); ++j) {
            if (detectors[i].mode == detectors[j].mode) {
                throw std::invalid_argument("mode '" +
                                            s.space().mode(detectors[i].mode).label +
                                            "' consumed twice");
            }
            if (detectors[i].label == detectors[j].label) {
                throw std::invalid_argument("duplicate detector '" + detectors[i].label + "'");
            }
            if (detectors[i].click_time == detectors[j].click_time) {
                throw std::invalid_argument("absorbing click times must be distinct");
            }
        }
    }
}

inline std::shared_ptr<const PatternSchema> click_schema(
    std::vector<AbsorbingDetector> detectors) {
    std::sort(detectors.begin(), detectors.end(),
              [](const auto& a, const auto& b) { return a.click_time < b.click_time; });
    auto schema = std::make_shared<PatternSchema>();
    for (const auto& d : detectors) {
        schema->slots.push_back(
            PatternSlot{SlotKind::AbsorbingClick, d.label, d.mode, {}, d.click_time});
    }
    return schema;
}

}  // namespace detail

/// The quantum step of a non-absorbing detector: on every config with the
/// watched mode occupied the (pristine) ancilla rotates into
/// overlap*|pristine> + sqrt(1-overlap^2)*|orthogonal>. Norm-preserving.
inline StateVector scatter_entangle(const StateVector& s, const NonAbsorbingDetector& det) {
    s.space().require_mode(det.mode);
    s.space().require_ancilla(det.ancilla);
    const uint64_t mode_bit = uint64_t{1} << det.mode.value;
    const uint64_t anc_bit = uint64_t{1} << det.ancilla.value;
    const double overlap = s.space().ancilla(det.ancilla).scattered_overlap;
    const double ortho = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));

    StateVector out(s.space_ptr());
    for (const auto& [c, a] : s.amplitudes()) {
        if (c.ancilla_bits & anc_bit) {
            throw std::invalid_argument("ancilla '" + s.space().ancilla(det.ancilla).label +
                                        "' is not pristine (double interaction unsupported)");
        }
        if (!(c.mode_bits & mode_bit)) {
            out.add_term(c, a);
            continue;
        }
        if (overlap != 0.0) out.add_term(c, a * overlap);
        if (ortho != 0.0) out.add_term(BasisConfig{c.mode_bits, c.ancilla_bits | anc_bit}, a * ortho);
    }
    out.prune_in_place(kPruneThreshold);
    return out;
}

/// Joint Born distribution of the absorbing detector set: one pattern per
/// subset of clicking detectors, probability = squared norm of the state
/// component with exactly those modes occupied among the detector modes,
/// post state = that component with every clicked particle absorbed.
inline OutcomeDistribution born_distribution(const StateVector& s,
                                             const std::vector<AbsorbingDetector>& detectors) {
    detail::validate_absorbing_set(s, detectors);
    auto schema = detail::click_schema(detectors);
    const double nn = s.squared_norm();
    if (nn <= 0.0) throw std::invalid_argument("cannot measure the zero vector");

    std::vector<OutcomeEntry> entries;
    const size_t n = schema->slots.size();
    for (uint64_t subset = 0; subset < (uint64_t{1} << n); ++subset) {
        StateVector component = s;
        for (size_t i = 0; i < n; ++i) {
            component = detail::restrict_occupation(component, schema->slots[i].mode,
                                                    subset & (uint64_t{1} << i));
        }
        const double p = component.squared_norm() / nn;
        if (p <= 0.0) continue;
        std::vector<Outcome> outcomes(n, Outcome::Silent);
        StateVector post = component;
        for (size_t i = 0; i < n; ++i) {
            if (subset & (uint64_t{1} << i)) {
                outcomes[i] = Outcome::Clicked;
                post = annihilate(post, schema->slots[i].mode);
            }
        }
        entries.push_back(
            OutcomeEntry{ClickPattern(schema, std::move(outcomes)), p, post.normalized()});
    }
    return OutcomeDistribution::make(schema, std::move(entries));
}

/// Collapse onto one click pattern: the component with exactly the clicked
/// modes occupied, clicked particles absorbed, renormalized.
inline StateVector project_click(const StateVector& s, const ClickPattern& pattern) {
    StateVector component = s;
    for (size_t i = 0; i < pattern.schema().slots.size(); ++i) {
        const auto& slot = pattern.schema().slots[i];
        if (slot.kind != SlotKind::AbsorbingClick) {
            throw std::invalid_argument("project_click expects a click-only pattern");
        }
        component =
            detail::restrict_occupation(component, slot.mode, pattern.outcomes()[i] == Outcome::Clicked);
    }
    if (component.squared_norm() <= 0.0) {
        throw std::invalid_argument("zero-probability click pattern");
    }
    for (size_t i = 0; i < pattern.schema().slots.size(); ++i) {
        if (pattern.outcomes()[i] == Outcome::Clicked) {
            component = annihilate(component, pattern.schema().slots[i].mode);
        }
    }
    return component.normalized();
}

/// Reads environment records. Computational: every listed ancilla is measured
/// pristine-vs-scattered. PlusMinusJoint: the paper-style two-outcome
/// measurement of (|pristine,scattered> +- |scattered,pristine>)/sqrt(2);
/// requires exactly two ancillas and support confined to that span.
inline OutcomeDistribution measure_ancilla(const StateVector& s,
                                           const std::vector<AncillaId>& ancillas,
                                           ReadoutBasis basis) {
    for (const auto id : ancillas) s.space().require_ancilla(id);
    const double nn = s.squared_norm();
    if (nn <= 0.0) throw std::invalid_argument("cannot measure the zero vector");

    if (basis == ReadoutBasis::Computational) {
        auto schema = std::make_shared<PatternSchema>();
        for (const auto id : ancillas) {
            schema->slots.push_back(PatternSlot{SlotKind::AncillaComputational,
                                                s.space().ancilla(id).label,
                                                ModeId{},
                                                {id},
                                                0});
        }
        std::vector<OutcomeEntry> entries;
        const size_t n = ancillas.size();
        for (uint64_t assignment = 0; assignment < (uint64_t{1} << n); ++assignment) {
            StateVector component = s;
            for (size_t i = 0; i < n; ++i) {
                component = detail::restrict_ancilla_bit(component, ancillas[i],
                                                         assignment & (uint64_t{1} << i));
            }
            const double p = component.squared_norm() / nn;
            if (p <= 0.0) continue;
            std::vector<Outcome> outcomes(n, Outcome::Pristine);
            for (size_t i = 0; i < n; ++i) {
                if (assignment & (uint64_t{1} << i)) outcomes[i] = Outcome::Scattered;
            }
            entries.push_back(
                OutcomeEntry{ClickPattern(schema, std::move(outcomes)), p, component.normalized()});
        }
        return OutcomeDistribution::make(schema, std::move(entries));
    }

    if (ancillas.size() != 2) {
        throw std::invalid_argument("plus/minus readout requires exactly two ancillas");
    }
    auto parts = detail::plus_minus_projections(s, ancillas[0], ancillas[1]);
    if (!parts.rest.is_zero()) {
        throw std::invalid_argument("support outside the plus/minus span");
    }
    auto schema = std::make_shared<PatternSchema>();
    schema->slots.push_back(PatternSlot{
        SlotKind::AncillaPlusMinusJoint,
        s.space().ancilla(ancillas[0]).label + s.space().ancilla(ancillas[1]).label,
        ModeId{},
        {ancillas[0], ancillas[1]},
        0});
    std::vector<OutcomeEntry> entries;
    const double p_plus = parts.plus.squared_norm() / nn;
    const double p_minus = parts.minus.squared_norm() / nn;
    if (p_plus > 0.0) {
        entries.push_back(OutcomeEntry{ClickPattern(schema, {Outcome::Plus}), p_plus,
                                       parts.plus.normalized()});
    }
    if (p_minus > 0.0) {
        entries.push_back(OutcomeEntry{ClickPattern(schema, {Outcome::Minus}), p_minus,
                                       parts.minus.normalized()});
    }
    return OutcomeDistribution::make(schema, std::move(entries));
}

}  // namespace interfersim

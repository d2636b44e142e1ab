// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "interfersim/measure/measure.hpp"
#include "interfersim/optics/transform.hpp"

namespace interfersim {

// One time-ordered step of an experiment. Unitaries and scatter interactions
// evolve the state; click and readout events are measurements.
struct ScatterEvent {
    NonAbsorbingDetector detector;
};
struct ClickEvent {
    AbsorbingDetector detector;
};
struct ReadoutEvent {
    std::string label;  // detector label, or the concatenated pair for joint readouts
    std::vector<AncillaId> ancillas;
    ReadoutBasis basis = ReadoutBasis::Computational;
};

struct Event {
    int64_t time = 0;
    int32_t sequence = 0;  // declaration index; breaks time ties deterministically
    std::variant<ModeTransform, ScatterEvent, ClickEvent, ReadoutEvent> action;
};

namespace detail {

inline std::vector<Event> sorted_events(std::vector<Event> events) {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.time != b.time ? a.time < b.time : a.sequence < b.sequence;
    });
    return events;
}

inline std::shared_ptr<const PatternSchema> event_schema(const std::vector<Event>& events) {
    std::vector<PatternSlot> clicks;
    std::vector<PatternSlot> readouts;
    for (const auto& ev : events) {
        if (const auto* click = std::get_if<ClickEvent>(&ev.action)) {
            clicks.push_back(PatternSlot{SlotKind::AbsorbingClick, click->detector.label,
                                         click->detector.mode,
                                         {},
                                         ev.time});
        } else if (const auto* readout = std::get_if<ReadoutEvent>(&ev.action)) {
            const auto kind = readout->basis == ReadoutBasis::Computational
                                  ? SlotKind::AncillaComputational
                                  : SlotKind::AncillaPlusMinusJoint;
            readouts.push_back(
                PatternSlot{kind, readout->label, ModeId{}, readout->ancillas, ev.time});
        }
    }
    const auto by_time = [](const PatternSlot& a, const PatternSlot& b) {
        return a.time < b.time;
    };
    std::stable_sort(clicks.begin(), clicks.end(), by_time);
    std::stable_sort(readouts.begin(), readouts.end(), by_time);
    auto schema = std::make_shared<PatternSchema>();
    schema->slots = std::move(clicks);
    schema->slots.insert(schema->slots.end(), readouts.begin(), readouts.end());
    for (size_t i = 0; i < schema->slots.size(); ++i) {
        for (size_t j = i + 1; j < schema->slots.size(); ++j) {
            if (schema->slots[i].label == schema->slots[j].label) {
                throw std::invalid_argument("duplicate detector label '" + schema->slots[i].label +
                                            "'");
            }
        }
    }
    return schema;
}

struct Branch {
    StateVector state;
    double probability = 1.0;
    std::vector<Outcome> outcomes;
};

// Expands one branch across the outcomes of a measurement event. `collapse`
// renormalizes children (probabilities tracked explicitly); otherwise the
// unnormalized projected amplitudes carry the weight until the end.
template <typename EventT>
void expand_measurement(const EventT& ev, size_t slot, bool collapse,
                        const Branch& branch, std::vector<Branch>& out) {
    const auto push = [&](StateVector&& component, Outcome outcome) {
        const double weight = component.squared_norm();
        if (weight <= 0.0) return;
        Branch child{collapse ? component.normalized() : std::move(component),
                     collapse ? branch.probability * weight : 1.0, branch.outcomes};
        child.outcomes[slot] = outcome;
        out.push_back(std::move(child));
    };

    if constexpr (std::is_same_v<EventT, ClickEvent>) {
        push(detail::restrict_occupation(branch.state, ev.detector.mode, false), Outcome::Silent);
        auto clicked = detail::restrict_occupation(branch.state, ev.detector.mode, true);
        push(annihilate(clicked, ev.detector.mode), Outcome::Clicked);
    } else {
        static_assert(std::is_same_v<EventT, ReadoutEvent>);
        if (ev.basis == ReadoutBasis::Computational) {
            push(detail::restrict_ancilla_bit(branch.state, ev.ancillas[0], false),
                 Outcome::Pristine);
            push(detail::restrict_ancilla_bit(branch.state, ev.ancillas[0], true),
                 Outcome::Scattered);
        } else {
            auto parts = detail::plus_minus_projections(branch.state, ev.ancillas[0],
                                                        ev.ancillas[1]);
            push(std::move(parts.plus), Outcome::Plus);
            push(std::move(parts.minus), Outcome::Minus);
            push(std::move(parts.rest), Outcome::Null);
        }
    }
}

inline OutcomeDistribution finish(std::shared_ptr<const PatternSchema> schema,
                                  std::vector<Branch> branches, bool collapse) {
    std::vector<OutcomeEntry> entries;
    entries.reserve(branches.size());
    for (auto& b : branches) {
        const double p = collapse ? b.probability : b.state.squared_norm();
        if (p <= 0.0) continue;
        entries.push_back(OutcomeEntry{ClickPattern(schema, std::move(b.outcomes)), p,
                                       collapse ? std::move(b.state) : b.state.normalized()});
    }
    return OutcomeDistribution::make(std::move(schema), std::move(entries));
}

}  // namespace detail

/// Walks the events in time order; every absorbing click and every ancilla
/// readout is processed as a textbook projective measurement the moment it
/// happens (enumerating all outcomes, projecting and renormalizing), exactly
/// following the collapse postulate.
inline OutcomeDistribution run_collapse_pipeline(const StateVector& initial,
                                                 std::vector<Event> events) {
    const auto ordered = detail::sorted_events(std::move(events));
    auto schema = detail::event_schema(ordered);

    std::vector<detail::Branch> branches;
    branches.push_back(detail::Branch{initial.normalized(), 1.0,
                                      std::vector<Outcome>(schema->slots.size(), Outcome::Silent)});
    for (const auto& ev : ordered) {
        if (const auto* transform = std::get_if<ModeTransform>(&ev.action)) {
            for (auto& b : branches) b.state = apply_mode_transform(b.state, *transform);
        } else if (const auto* scatter = std::get_if<ScatterEvent>(&ev.action)) {
            for (auto& b : branches) b.state = scatter_entangle(b.state, scatter->detector);
        } else if (const auto* click = std::get_if<ClickEvent>(&ev.action)) {
            const size_t slot = *schema->find(click->detector.label);
            std::vector<detail::Branch> next;
            for (const auto& b : branches) detail::expand_measurement(*click, slot, true, b, next);
            branches = std::move(next);
        } else {
            const auto& readout = std::get<ReadoutEvent>(ev.action);
            const size_t slot = *schema->find(readout.label);
            std::vector<detail::Branch> next;
            for (const auto& b : branches) detail::expand_measurement(readout, slot, true, b, next);
            branches = std::move(next);
        }
    }
    return detail::finish(std::move(schema), std::move(branches), true);
}

/// No collapse anywhere: all unitaries and entangling interactions are
/// applied first, then the full joint distribution comes from a single
/// Born-rule evaluation over the commuting click/readout projectors.
inline OutcomeDistribution run_unitary_pipeline(const StateVector& initial,
                                                std::vector<Event> events) {
    const auto ordered = detail::sorted_events(std::move(events));
    auto schema = detail::event_schema(ordered);

    StateVector evolved = initial.normalized();
    for (const auto& ev : ordered) {
        if (const auto* transform = std::get_if<ModeTransform>(&ev.action)) {
            evolved = apply_mode_transform(evolved, *transform);
        } else if (const auto* scatter = std::get_if<ScatterEvent>(&ev.action)) {
            evolved = scatter_entangle(evolved, scatter->detector);
        }
    }

    std::vector<detail::Branch> leaves;
    leaves.push_back(detail::Branch{std::move(evolved), 1.0,
                                    std::vector<Outcome>(schema->slots.size(), Outcome::Silent)});
    for (const auto& ev : ordered) {
        if (const auto* click = std::get_if<ClickEvent>(&ev.action)) {
            const size_t slot = *schema->find(click->detector.label);
            std::vector<detail::Branch> next;
            for (const auto& b : leaves) detail::expand_measurement(*click, slot, false, b, next);
            leaves = std::move(next);
        } else if (const auto* readout = std::get_if<ReadoutEvent>(&ev.action)) {
            const size_t slot = *schema->find(readout->label);
            std::vector<detail::Branch> next;
            for (const auto& b : leaves) detail::expand_measurement(*readout, slot, false, b, next);
            leaves = std::move(next);
        }
    }
    return detail::finish(std::move(schema), std::move(leaves), false);
}

}  // namespace interfersim

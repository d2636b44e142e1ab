// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "interfersim/diagnostics.hpp"
#include "interfersim/measure/pipeline.hpp"

namespace interfersim {

struct SourceLocation {
    int line = 0;
    int column = 0;
};

struct ModeDecl {
    std::string label;
    SourceLocation loc{};  // the name token
    friend bool operator==(const ModeDecl& a, const ModeDecl& b) { return a.label == b.label; }
};

struct AncillaDecl {
    std::string label;
    double overlap = 0.0;
    SourceLocation loc{};
    friend bool operator==(const AncillaDecl& a, const AncillaDecl& b) {
        return a.label == b.label && a.overlap == b.overlap;
    }
};

/// Emits exactly one fermion per run into `mode`. All sources of an
/// experiment share the same spin filter tag, so spin never appears as a
/// dynamical degree of freedom.
struct SourceDecl {
    std::string label;
    std::string mode;
    std::string spin_tag = "up";
    SourceLocation loc{};
    SourceLocation mode_loc{};
    friend bool operator==(const SourceDecl& a, const SourceDecl& b) {
        return a.label == b.label && a.mode == b.mode && a.spin_tag == b.spin_tag;
    }
};

struct BeamSplitterDecl {
    std::string label;
    std::string in_a, in_b, out_a, out_b;
    int64_t time = 0;
    SourceLocation loc{};
    SourceLocation in_a_loc{}, in_b_loc{}, out_a_loc{}, out_b_loc{};
    friend bool operator==(const BeamSplitterDecl& a, const BeamSplitterDecl& b) {
        return a.label == b.label && a.in_a == b.in_a && a.in_b == b.in_b && a.out_a == b.out_a &&
               a.out_b == b.out_b && a.time == b.time;
    }
};

struct PhaseDecl {
    std::string mode;
    double theta = 0.0;
    int64_t time = 0;
    SourceLocation loc{};
    SourceLocation mode_loc{};
    friend bool operator==(const PhaseDecl& a, const PhaseDecl& b) {
        return a.mode == b.mode && a.theta == b.theta && a.time == b.time;
    }
};

using ElementDecl = std::variant<BeamSplitterDecl, PhaseDecl>;

struct AbsorbingDecl {
    std::string label;
    std::string mode;
    int64_t click_time = 0;
    SourceLocation loc{};
    SourceLocation mode_loc{};
    friend bool operator==(const AbsorbingDecl& a, const AbsorbingDecl& b) {
        return a.label == b.label && a.mode == b.mode && a.click_time == b.click_time;
    }
};

struct NonAbsorbingDecl {
    std::string label;
    std::string mode;
    std::string ancilla;
    int64_t interact_time = 0;
    int64_t readout_time = 0;
    ReadoutBasis basis = ReadoutBasis::Computational;
    SourceLocation loc{};
    SourceLocation mode_loc{};
    SourceLocation ancilla_loc{};
    friend bool operator==(const NonAbsorbingDecl& a, const NonAbsorbingDecl& b) {
        return a.label == b.label && a.mode == b.mode && a.ancilla == b.ancilla &&
               a.interact_time == b.interact_time && a.readout_time == b.readout_time &&
               a.basis == b.basis;
    }
};

/// Declarative, time-ordered layout of one interferometry experiment. Labels
/// are resolved against the mode/ancilla declarations when the graph is
/// compiled into an event list.
struct ExperimentGraph {
    std::vector<ModeDecl> modes;
    std::vector<AncillaDecl> ancillas;
    std::vector<SourceDecl> sources;
    std::vector<ElementDecl> elements;
    std::vector<NonAbsorbingDecl> ndetectors;
    std::vector<AbsorbingDecl> adetectors;

    friend bool operator==(const ExperimentGraph& a, const ExperimentGraph& b) {
        return a.modes == b.modes && a.ancillas == b.ancillas && a.sources == b.sources &&
               a.elements == b.elements && a.ndetectors == b.ndetectors &&
               a.adetectors == b.adetectors;
    }

    bool has_mode(std::string_view label) const {
        for (const auto& m : modes) {
            if (m.label == label) return true;
        }
        return false;
    }

    /// Semantic validation; the graph is runnable iff no Severity::Error
    /// entries come back. Unreferenced modes are reported as warnings.
    std::vector<Diagnostic> validate() const;

    std::shared_ptr<const FockSpace> space() const {
        std::vector<Mode> ms;
        ms.reserve(modes.size());
        for (const auto& m : modes) ms.push_back(Mode{m.label});
        std::vector<Ancilla> as;
        as.reserve(ancillas.size());
        for (const auto& a : ancillas) as.push_back(Ancilla{a.label, a.overlap});
        return std::make_shared<const FockSpace>(std::move(ms), std::move(as));
    }

    /// One fermion per source, created in declaration order; every ancilla
    /// pristine. The declaration order fixes the (unobservable) global sign.
    StateVector initial_state(const std::shared_ptr<const FockSpace>& sp) const {
        StateVector state = StateVector::vacuum(sp);
        for (const auto& src : sources) state = create(state, sp->mode_id(src.mode));
        return state;
    }

    std::vector<Event> compile_events(const std::shared_ptr<const FockSpace>& sp) const {
        std::vector<Event> events;
        int32_t seq = 0;
        for (const auto& element : elements) {
            if (const auto* bs = std::get_if<BeamSplitterDecl>(&element)) {
                events.push_back(Event{bs->time, seq++,
                                       make_beam_splitter(sp->mode_id(bs->in_a),
                                                          sp->mode_id(bs->in_b),
                                                          sp->mode_id(bs->out_a),
                                                          sp->mode_id(bs->out_b))});
            } else {
                const auto& ph = std::get<PhaseDecl>(element);
                events.push_back(
                    Event{ph.time, seq++, make_phase_shifter(sp->mode_id(ph.mode), ph.theta)});
            }
        }
        std::vector<const NonAbsorbingDecl*> joint;
        for (const auto& nd : ndetectors) {
            NonAbsorbingDetector det{nd.label,          sp->mode_id(nd.mode),
                                     sp->ancilla_id(nd.ancilla), nd.interact_time,
                                     nd.readout_time,   nd.basis};
            events.push_back(Event{nd.interact_time, seq++, ScatterEvent{det}});
            if (nd.basis == ReadoutBasis::Computational) {
                events.push_back(Event{nd.readout_time, seq++,
                                       ReadoutEvent{nd.label,
                                                    {sp->ancilla_id(nd.ancilla)},
                                                    ReadoutBasis::Computational}});
            } else {
                joint.push_back(&nd);
            }
        }
        if (!joint.empty()) {
            // validation guarantees exactly two, sharing a readout time
            events.push_back(Event{joint[0]->readout_time, seq++,
                                   ReadoutEvent{joint[0]->label + joint[1]->label,
                                                {sp->ancilla_id(joint[0]->ancilla),
                                                 sp->ancilla_id(joint[1]->ancilla)},
                                                ReadoutBasis::PlusMinusJoint}});
        }
        for (const auto& ad : adetectors) {
            events.push_back(Event{ad.click_time, seq++,
                                   ClickEvent{AbsorbingDetector{ad.label, sp->mode_id(ad.mode),
                                                                ad.click_time}}});
        }
        return events;
    }

    /// Number of fermions emitted per run.
    uint32_t particle_count() const { return static_cast<uint32_t>(sources.size()); }
};

inline std::vector<Diagnostic> ExperimentGraph::validate() const {
    std::vector<Diagnostic> diags;
    const auto error = [&](const SourceLocation& loc, std::string message, std::string token = {}) {
        diags.push_back(Diagnostic{Severity::Error, loc.line, loc.column, std::move(message),
                                   std::move(token)});
    };

    std::set<std::string> mode_names;
    for (const auto& m : modes) {
        if (!mode_names.insert(m.label).second) {
            error(m.loc, "duplicate mode '" + m.label + "'", m.label);
        }
    }
    std::set<std::string> ancilla_names;
    for (const auto& a : ancillas) {
        if (!ancilla_names.insert(a.label).second) {
            error(a.loc, "duplicate ancilla '" + a.label + "'", a.label);
        }
        if (a.overlap < 0.0 || a.overlap > 1.0) {
            error(a.loc, "overlap must lie in [0,1]");
        }
    }

    const auto check_mode = [&](const std::string& label, const SourceLocation& loc) {
        if (!mode_names.count(label)) error(loc, "unknown mode '" + label + "'", label);
    };

    std::set<std::string> referenced_modes;
    std::set<std::string> source_names;
    std::set<std::string> source_modes;
    std::string spin_tag;
    for (const auto& s : sources) {
        if (!source_names.insert(s.label).second) {
            error(s.loc, "duplicate source '" + s.label + "'", s.label);
        }
        check_mode(s.mode, s.mode_loc);
        referenced_modes.insert(s.mode);
        if (!source_modes.insert(s.mode).second) {
            error(s.mode_loc, "source mode '" + s.mode + "' used twice", s.mode);
        }
        if (spin_tag.empty()) {
            spin_tag = s.spin_tag;
        } else if (s.spin_tag != spin_tag) {
            error(s.loc, "sources must share one spin tag");
        }
    }

    // absorbing detectors first: their click times bound element times below
    std::set<std::string> detector_names;
    std::map<std::string, int64_t> absorbed_at;
    std::set<int64_t> click_times;
    for (const auto& d : adetectors) {
        if (!detector_names.insert(d.label).second) {
            error(d.loc, "duplicate detector '" + d.label + "'", d.label);
        }
        check_mode(d.mode, d.mode_loc);
        referenced_modes.insert(d.mode);
        if (absorbed_at.count(d.mode)) {
            error(d.mode_loc, "mode '" + d.mode + "' consumed twice", d.mode);
        } else {
            absorbed_at[d.mode] = d.click_time;
        }
        if (!click_times.insert(d.click_time).second) {
            error(d.loc, "duplicate click time " + std::to_string(d.click_time));
        }
    }

    const auto check_live = [&](const std::string& mode, int64_t time,
                                const SourceLocation& loc) {
        auto it = absorbed_at.find(mode);
        if (it != absorbed_at.end() && time >= it->second) {
            error(loc, "mode '" + mode + "' used after absorption", mode);
        }
    };

    for (const auto& element : elements) {
        if (const auto* bs = std::get_if<BeamSplitterDecl>(&element)) {
            const std::pair<const std::string*, const SourceLocation*> ports[4] = {
                {&bs->in_a, &bs->in_a_loc},
                {&bs->in_b, &bs->in_b_loc},
                {&bs->out_a, &bs->out_a_loc},
                {&bs->out_b, &bs->out_b_loc}};
            for (const auto& [m, l] : ports) {
                check_mode(*m, *l);
                referenced_modes.insert(*m);
                check_live(*m, bs->time, *l);
            }
            if (bs->in_a == bs->in_b) {
                error(bs->loc, "beam splitter input ports must be distinct");
            }
            if (bs->out_a == bs->out_b) {
                error(bs->loc, "beam splitter output ports must be distinct");
            }
            const bool in_place = (bs->in_a == bs->out_a && bs->in_b == bs->out_b) ||
                                  (bs->in_a == bs->out_b && bs->in_b == bs->out_a);
            const bool touches = bs->out_a == bs->in_a || bs->out_a == bs->in_b ||
                                 bs->out_b == bs->in_a || bs->out_b == bs->in_b;
            if (!in_place && touches) {
                error(bs->loc, "beam splitter ports must be fully distinct or coincide pairwise");
            }
        } else {
            const auto& ph = std::get<PhaseDecl>(element);
            check_mode(ph.mode, ph.mode_loc);
            referenced_modes.insert(ph.mode);
            check_live(ph.mode, ph.time, ph.mode_loc);
        }
    }

    std::set<std::string> bound_ancillas;
    std::vector<const NonAbsorbingDecl*> plusminus;
    for (const auto& nd : ndetectors) {
        if (!detector_names.insert(nd.label).second) {
            error(nd.loc, "duplicate detector '" + nd.label + "'", nd.label);
        }
        check_mode(nd.mode, nd.mode_loc);
        referenced_modes.insert(nd.mode);
        check_live(nd.mode, nd.interact_time, nd.mode_loc);
        if (!ancilla_names.count(nd.ancilla)) {
            error(nd.ancilla_loc, "unknown ancilla '" + nd.ancilla + "'", nd.ancilla);
        } else if (!bound_ancillas.insert(nd.ancilla).second) {
            error(nd.ancilla_loc, "ancilla '" + nd.ancilla + "' already bound to a detector",
                  nd.ancilla);
        }
        if (nd.readout_time <= nd.interact_time) {
            error(nd.loc, "readout time must be greater than interaction time");
        }
        if (nd.basis == ReadoutBasis::PlusMinusJoint) plusminus.push_back(&nd);
    }
    if (!plusminus.empty()) {
        if (plusminus.size() != 2) {
            error(plusminus.front()->loc,
                  "plus/minus readout requires exactly two ancilla detectors");
        } else if (plusminus[0]->readout_time != plusminus[1]->readout_time) {
            error(plusminus[1]->loc, "plus/minus readouts must share a readout time");
        }
    }

    for (const auto& m : modes) {
        if (!referenced_modes.count(m.label)) {
            diags.push_back(Diagnostic{Severity::Warning, m.loc.line, m.loc.column,
                                       "unreferenced mode '" + m.label + "'", m.label});
        }
    }
    return diags;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

}  // namespace interfersim

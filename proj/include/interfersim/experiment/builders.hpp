// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "interfersim/experiment/graph.hpp"

namespace interfersim {

/// Two spin-filtered single-fermion sources, a splitter per source, phase
/// shifts on the b-paths, the recombining splitters, non-absorbing detectors
/// B1/B2 watching the b-paths, and absorbing detectors C/D/E that all click
/// before the B records are read out. The f port stays undetected.
///
/// `overlap` is |<pristine|scattered>| of the B records (0 = perfect
/// which-path marker). The readout basis defaults to the joint plus/minus
/// measurement, which is the configuration whose coincidence statistics
/// recover the theta fringe.
inline ExperimentGraph build_part_a(double theta1, double theta2, double overlap,
                                    ReadoutBasis basis = ReadoutBasis::PlusMinusJoint) {
    ExperimentGraph g;
    g.modes = {{"a1"}, {"b1"}, {"a2"}, {"b2"}, {"c"}, {"f"}, {"d"}, {"e"}};
    g.ancillas = {{"M", overlap}, {"N", overlap}};
    g.sources = {{"S1", "a1"}, {"S2", "a2"}};
    g.elements = {
        BeamSplitterDecl{"BS1", "a1", "b1", "a1", "b1", 1},
        BeamSplitterDecl{"BS2", "a2", "b2", "a2", "b2", 2},
        PhaseDecl{"b1", theta1, 3},
        PhaseDecl{"b2", theta2, 4},
        BeamSplitterDecl{"BSp", "a1", "a2", "c", "f", 5},
        BeamSplitterDecl{"BSpp", "b1", "b2", "d", "e", 8},
    };
    g.ndetectors = {
        {"B1", "b1", "M", 6, 12, basis},
        {"B2", "b2", "N", 7, 12, basis},
    };
    g.adetectors = {{"C", "c", 9}, {"D", "d", 10}, {"E", "e", 11}};
    return g;
}

/// The same interferometer with the non-absorbing detectors removed: two
/// indistinguishable fermions, so the coincidence statistics at the final
/// splitter carry the theta fringe directly.
inline ExperimentGraph build_part_b(double theta1, double theta2) {
    ExperimentGraph g;
    g.modes = {{"a1"}, {"b1"}, {"a2"}, {"b2"}, {"c"}, {"f"}, {"d"}, {"e"}};
    g.sources = {{"S1", "a1"}, {"S2", "a2"}};
    g.elements = {
        BeamSplitterDecl{"BS1", "a1", "b1", "a1", "b1", 1},
        BeamSplitterDecl{"BS2", "a2", "b2", "a2", "b2", 2},
        PhaseDecl{"b1", theta1, 3},
        PhaseDecl{"b2", theta2, 4},
        BeamSplitterDecl{"BSp", "a1", "a2", "c", "f", 5},
        BeamSplitterDecl{"BSpp", "b1", "b2", "d", "e", 8},
    };
    g.adetectors = {{"C", "c", 9}, {"D", "d", 10}, {"E", "e", 11}};
    return g;
}

}  // namespace interfersim

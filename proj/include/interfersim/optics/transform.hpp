// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "interfersim/fock/state.hpp"

namespace interfersim {

/// Unitary acting on a subset of modes at the creation-operator level:
/// column j holds the image of mode modes[j], i.e.
/// c_{modes[j]}^dagger -> sum_i matrix(i, j) c_{modes[i]}^dagger.
struct ModeTransform {
    std::vector<ModeId> modes;
    Eigen::MatrixXcd matrix;
};

struct PhaseShifter {
    ModeId mode;
    double theta = 0.0;
};

/// True iff max |(U^dagger U - I)_{ij}| <= tol.
inline bool check_unitary(const Eigen::MatrixXcd& u, double tol) {
    if (u.rows() != u.cols()) throw std::invalid_argument("unitarity check needs a square matrix");
    const Eigen::MatrixXcd g = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return g.cwiseAbs().maxCoeff() <= tol;
}

/// 50/50 splitter with the fixed convention
///   inA -> (outA + outB)/sqrt(2),  inB -> (outA - outB)/sqrt(2).
/// Output labels may coincide pairwise with the inputs (in-place mixing);
/// otherwise all four modes must be distinct and the transform is extended
/// to a unitary on the 4-mode span by mapping the output pair back onto the
/// inputs (irrelevant whenever the output modes start in vacuum).
inline ModeTransform make_beam_splitter(ModeId in_a, ModeId in_b, ModeId out_a, ModeId out_b) {
    if (in_a == in_b) throw std::invalid_argument("beam splitter input ports must be distinct");
    if (out_a == out_b) throw std::invalid_argument("beam splitter output ports must be distinct");
    const double r = 1.0 / std::sqrt(2.0);

    const bool in_place = (in_a == out_a && in_b == out_b) || (in_a == out_b && in_b == out_a);
    if (in_place) {
        ModeTransform t;
        t.modes = {in_a, in_b};
        t.matrix = Eigen::MatrixXcd::Zero(2, 2);
        const int a_row = (out_a == in_a) ? 0 : 1;
        const int b_row = 1 - a_row;
        // column 0: image of in_a, column 1: image of in_b
        t.matrix(a_row, 0) = r;
        t.matrix(b_row, 0) = r;
        t.matrix(a_row, 1) = r;
        t.matrix(b_row, 1) = -r;
        return t;
    }

    const bool touches_inputs = (out_a == in_a || out_a == in_b || out_b == in_a || out_b == in_b);
    if (touches_inputs) {
        throw std::invalid_argument(
            "beam splitter ports must be fully distinct or coincide pairwise");
    }
    ModeTransform t;
    t.modes = {in_a, in_b, out_a, out_b};
    t.matrix = Eigen::MatrixXcd::Zero(4, 4);
    t.matrix(2, 0) = r;  // in_a -> (out_a + out_b)/sqrt(2)
    t.matrix(3, 0) = r;
    t.matrix(2, 1) = r;  // in_b -> (out_a - out_b)/sqrt(2)
    t.matrix(3, 1) = -r;
    t.matrix(0, 2) = r;  // completion: out pair maps back onto the in pair
    t.matrix(1, 2) = r;
    t.matrix(0, 3) = r;
    t.matrix(1, 3) = -r;
    return t;
}

/// e^{i theta} on the occupied-mode amplitude, as a 1x1 transform.
inline ModeTransform make_phase_shifter(ModeId mode, double theta) {
    ModeTransform t;
    t.modes = {mode};
    t.matrix = Eigen::MatrixXcd::Zero(1, 1);
    t.matrix(0, 0) = std::polar(1.0, theta);
    return t;
}

inline ModeTransform to_transform(const PhaseShifter& p) {
    return make_phase_shifter(p.mode, p.theta);
}

/// Second-quantized application of the single-particle unitary. Each config
/// is rebuilt by replaying its creation operators (descending index order,
/// matching the ascending-product convention) with transformed creators, so
/// fermionic reordering signs and Pauli cancellations are exact.
inline StateVector apply_mode_transform(const StateVector& s, const ModeTransform& t) {
    const auto n = static_cast<long>(t.modes.size());
    if (t.matrix.rows() != n || t.matrix.cols() != n) {
        throw std::invalid_argument("transform matrix shape does not match its mode list");
    }
    std::vector<long> column_of(s.space().mode_count(), -1);
    for (long j = 0; j < n; ++j) {
        s.space().require_mode(t.modes[j]);
        if (column_of[t.modes[j].value] != -1) {
            throw std::invalid_argument("transform mode list contains duplicates");
        }
        column_of[t.modes[j].value] = j;
    }
    if (!check_unitary(t.matrix, kTol)) {
        throw std::invalid_argument("mode transform matrix is not unitary");
    }

    StateVector result(s.space_ptr());
    for (const auto& [config, amp] : s.amplitudes()) {
        StateVector acc(s.space_ptr());
        acc.add_term(BasisConfig{0, config.ancilla_bits}, amp);
        // replay creators right-to-left: descending index keeps |config> =
        // (ascending product of creators)|vac>
        for (int m = static_cast<int>(s.space().mode_count()) - 1; m >= 0; --m) {
            if (!(config.mode_bits & (uint64_t{1} << m))) continue;
            const long col = column_of[static_cast<size_t>(m)];
            if (col < 0) {
                acc = create(acc, ModeId{static_cast<uint32_t>(m)});
            } else {
                StateVector next(s.space_ptr());
                for (long i = 0; i < n; ++i) {
                    const Amplitude w = t.matrix(i, col);
                    if (std::abs(w) < kPruneThreshold) continue;
                    next = next + w * create(acc, t.modes[static_cast<size_t>(i)]);
                }
                acc = std::move(next);
            }
        }
        result = result + acc;
    }
    return result.pruned();
}

}  // namespace interfersim

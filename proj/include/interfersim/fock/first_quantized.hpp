// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "interfersim/fock/state.hpp"

namespace interfersim {

/// Dense labeled-particle wavefunction psi(slot_1, ..., slot_n; ancilla
/// assignment). Fully antisymmetric in the mode slots for every fixed
/// ancilla assignment. Bridges the occupation-number engine to explicit
/// antisymmetrized expressions; also the representation used by the
/// brute-force cross-check evaluator in the test suite.
struct FirstQuantizedState {
    uint32_t particle_count = 0;
    uint32_t mode_count = 0;
    uint32_t ancilla_count = 0;
    std::vector<std::complex<double>> data;

    FirstQuantizedState() = default;
    FirstQuantizedState(uint32_t particles, uint32_t modes, uint32_t ancillas)
        : particle_count(particles), mode_count(modes), ancilla_count(ancillas) {
        size_t n = 1;
        for (uint32_t k = 0; k < particles; ++k) n *= modes;
        n <<= ancillas;
        data.assign(n, {0.0, 0.0});
    }

    size_t index(std::span<const uint32_t> slots, uint64_t ancilla_assignment) const {
        size_t idx = 0;
        for (uint32_t k = 0; k < particle_count; ++k) idx = idx * mode_count + slots[k];
        return (idx << ancilla_count) | ancilla_assignment;
    }

    std::complex<double>& at(std::span<const uint32_t> slots, uint64_t anc) {
        return data[index(slots, anc)];
    }
    const std::complex<double>& at(std::span<const uint32_t> slots, uint64_t anc) const {
        return data[index(slots, anc)];
    }

    double squared_norm() const {
        double n = 0.0;
        for (const auto& v : data) n += std::norm(v);
        return n;
    }
};

namespace detail {

inline int permutation_parity(std::span<const uint32_t> perm, std::span<const uint32_t> sorted) {
    // counts inversions relative to the sorted reference; n is tiny here
    int inversions = 0;
    for (size_t i = 0; i < perm.size(); ++i) {
        for (size_t j = i + 1; j < perm.size(); ++j) {
            size_t pi = 0, pj = 0;
            while (sorted[pi] != perm[i]) ++pi;
            while (sorted[pj] != perm[j]) ++pj;
            if (pi > pj) ++inversions;
        }
    }
    return (inversions & 1) ? -1 : 1;
}

}  // namespace detail

/// Expands an n-particle occupation state into the antisymmetrized
/// labeled-slot tensor: |{m1<...<mn}> -> sum_perm sgn(perm)/sqrt(n!)
/// |m_perm(1)>_1 ... |m_perm(n)>_n. Requires fixed particle number.
inline FirstQuantizedState to_first_quantized(const StateVector& s) {
    if (s.is_zero()) throw std::invalid_argument("cannot expand the zero vector");
    int particles = -1;
    for (const auto& [c, a] : s.amplitudes()) {
        const int n = std::popcount(c.mode_bits);
        if (particles < 0) particles = n;
        if (n != particles) throw std::invalid_argument("mixed particle number across support");
    }
    FirstQuantizedState out(static_cast<uint32_t>(particles),
                            static_cast<uint32_t>(s.space().mode_count()),
                            static_cast<uint32_t>(s.space().ancilla_count()));
    double factorial = 1.0;
    for (int k = 2; k <= particles; ++k) factorial *= k;
    const double scale = 1.0 / std::sqrt(factorial);

    for (const auto& [c, a] : s.amplitudes()) {
        std::vector<uint32_t> occupied;
        for (uint32_t m = 0; m < out.mode_count; ++m) {
            if (c.mode_bits & (uint64_t{1} << m)) occupied.push_back(m);
        }
        std::vector<uint32_t> perm = occupied;
        do {
            const int sign = detail::permutation_parity(perm, occupied);
            out.at(perm, c.ancilla_bits) += a * static_cast<double>(sign) * scale;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

/// Inverse of to_first_quantized over the given space.
inline StateVector from_first_quantized(const FirstQuantizedState& fq,
                                        std::shared_ptr<const FockSpace> space) {
    if (!space || space->mode_count() != fq.mode_count ||
        space->ancilla_count() != fq.ancilla_count) {
        throw std::invalid_argument("space does not match tensor dimensions");
    }
    double factorial = 1.0;
    for (uint32_t k = 2; k <= fq.particle_count; ++k) factorial *= k;
    const double scale = std::sqrt(factorial);

    StateVector out(space);
    std::vector<uint32_t> slots(fq.particle_count);
    const uint64_t anc_count = uint64_t{1} << fq.ancilla_count;

    // walk ascending mode combinations
    for (uint32_t k = 0; k < fq.particle_count; ++k) slots[k] = k;
    const auto advance = [&]() -> bool {
        const uint32_t n = fq.particle_count;
        for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
            if (slots[i] + (n - i) <= fq.mode_count - 1 + 0u) {
                ++slots[i];
                for (uint32_t j = i + 1; j < n; ++j) slots[j] = slots[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    if (fq.particle_count > fq.mode_count) throw std::invalid_argument("more particles than modes");

    bool more = true;
    while (more) {
        uint64_t bits = 0;
        for (uint32_t k = 0; k < fq.particle_count; ++k) bits |= uint64_t{1} << slots[k];
        for (uint64_t anc = 0; anc < anc_count; ++anc) {
            const auto v = fq.at(slots, anc) * scale;
            if (std::abs(v) >= kPruneThreshold) out.add_term(BasisConfig{bits, anc}, v);
        }
        more = fq.particle_count > 0 && advance();
        if (fq.particle_count == 0) break;
    }
    out.prune_in_place(kPruneThreshold);
    return out;
}

}  // namespace interfersim

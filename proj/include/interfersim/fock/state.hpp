// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

#include "interfersim/fock/space.hpp"
#include "interfersim/version.hpp"

namespace interfersim {

using Amplitude = std::complex<double>;

/// Pure state as a sparse map BasisConfig -> amplitude over a shared
/// FockSpace. Immutable in practice: every operation returns a new value.
///
/// Sign convention: |config> is the product of creation operators over the
/// occupied modes in ascending index order applied to the vacuum. create()
/// and annihilate() carry the resulting (-1)^(occupied below) factors, so
/// anticommutation and Pauli exclusion are structural.
class StateVector {
  public:
    using AmplitudeMap = std::map<BasisConfig, Amplitude>;

    explicit StateVector(std::shared_ptr<const FockSpace> space) : space_(std::move(space)) {
        if (!space_) throw std::invalid_argument("StateVector requires a space");
    }

    StateVector(std::shared_ptr<const FockSpace> space, AmplitudeMap amps, bool prune = true)
        : space_(std::move(space)), amps_(std::move(amps)) {
        if (!space_) throw std::invalid_argument("StateVector requires a space");
        for (const auto& [config, amp] : amps_) {
            if (!space_->contains(config)) {
                throw std::invalid_argument("basis config outside of space");
            }
            (void)amp;
        }
        if (prune) prune_in_place(kPruneThreshold);
    }

    static StateVector vacuum(std::shared_ptr<const FockSpace> space) {
        StateVector s(std::move(space));
        s.amps_[BasisConfig{}] = Amplitude{1.0, 0.0};
        return s;
    }

    static StateVector basis_state(std::shared_ptr<const FockSpace> space, BasisConfig config) {
        StateVector s(std::move(space));
        if (!s.space_->contains(config)) throw std::invalid_argument("basis config outside of space");
        s.amps_[config] = Amplitude{1.0, 0.0};
        return s;
    }

    const std::shared_ptr<const FockSpace>& space_ptr() const { return space_; }
    const FockSpace& space() const { return *space_; }
    const AmplitudeMap& amplitudes() const { return amps_; }
    size_t support_size() const { return amps_.size(); }
    bool is_zero() const { return amps_.empty(); }

    Amplitude amplitude(const BasisConfig& c) const {
        auto it = amps_.find(c);
        return it == amps_.end() ? Amplitude{0.0, 0.0} : it->second;
    }

    double squared_norm() const {
        double n = 0.0;
        for (const auto& [c, a] : amps_) n += std::norm(a);
        return n;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    StateVector normalized() const {
        const double n = norm();
        if (n <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
        return *this * Amplitude{1.0 / n, 0.0};
    }

    StateVector pruned(double threshold = kPruneThreshold) const {
        StateVector out = *this;
        out.prune_in_place(threshold);
        return out;
    }

    friend StateVector operator*(const StateVector& s, Amplitude z) {
        StateVector out(s.space_);
        for (const auto& [c, a] : s.amps_) out.amps_[c] = a * z;
        out.prune_in_place(kPruneThreshold);
        return out;
    }
    friend StateVector operator*(Amplitude z, const StateVector& s) { return s * z; }

    friend StateVector operator+(const StateVector& lhs, const StateVector& rhs) {
        lhs.require_same_space(rhs);
        StateVector out(lhs.space_);
        out.amps_ = lhs.amps_;
        for (const auto& [c, a] : rhs.amps_) out.amps_[c] += a;
        out.prune_in_place(kPruneThreshold);
        return out;
    }
    friend StateVector operator-(const StateVector& lhs, const StateVector& rhs) {
        return lhs + rhs * Amplitude{-1.0, 0.0};
    }

    void require_same_space(const StateVector& other) const {
        if (space_ == other.space_) return;
        if (!space_->same_layout(*other.space_)) {
            throw std::invalid_argument("states live in different mode/ancilla spaces");
        }
    }

    /// In-place accumulation helper for operation implementations.
    void add_term(const BasisConfig& c, Amplitude a) { amps_[c] += a; }
    void prune_in_place(double threshold) {
        for (auto it = amps_.begin(); it != amps_.end();) {
            if (std::abs(it->second) < threshold) {
                it = amps_.erase(it);
            } else {
                ++it;
            }
        }
    }

  private:
    std::shared_ptr<const FockSpace> space_;
    AmplitudeMap amps_;
};

/// c_m^dagger acting on the state. Result may be zero (Pauli exclusion) and
/// is intentionally unnormalized.
inline StateVector create(const StateVector& s, ModeId mode) {
    s.space().require_mode(mode);
    const uint64_t bit = uint64_t{1} << mode.value;
    const uint64_t below = bit - 1;
    StateVector out(s.space_ptr());
    for (const auto& [config, amp] : s.amplitudes()) {
        if (config.mode_bits & bit) continue;  // c^dagger c^dagger = 0
        const int sign = (std::popcount(config.mode_bits & below) & 1) ? -1 : 1;
        out.add_term(BasisConfig{config.mode_bits | bit, config.ancilla_bits},
                     amp * static_cast<double>(sign));
    }
    out.prune_in_place(kPruneThreshold);
    return out;
}

/// c_m acting on the state; adjoint of create with the matching sign
/// convention, so annihilate(create(s, m), m) = s on m-empty states.
inline StateVector annihilate(const StateVector& s, ModeId mode) {
    s.space().require_mode(mode);
    const uint64_t bit = uint64_t{1} << mode.value;
    const uint64_t below = bit - 1;
    StateVector out(s.space_ptr());
    for (const auto& [config, amp] : s.amplitudes()) {
        if (!(config.mode_bits & bit)) continue;
        const int sign = (std::popcount(config.mode_bits & below) & 1) ? -1 : 1;
        out.add_term(BasisConfig{config.mode_bits & ~bit, config.ancilla_bits},
                     amp * static_cast<double>(sign));
    }
    out.prune_in_place(kPruneThreshold);
    return out;
}

/// <s1|s2>, conjugate-linear in the first argument.
inline Amplitude inner_product(const StateVector& s1, const StateVector& s2) {
    s1.require_same_space(s2);
    Amplitude acc{0.0, 0.0};
    const auto& a1 = s1.amplitudes();
    const auto& a2 = s2.amplitudes();
    // iterate over the smaller support
    if (a1.size() <= a2.size()) {
        for (const auto& [c, v] : a1) {
            auto it = a2.find(c);
            if (it != a2.end()) acc += std::conj(v) * it->second;
        }
    } else {
        for (const auto& [c, v] : a2) {
            auto it = a1.find(c);
            if (it != a1.end()) acc += std::conj(it->second) * v;
        }
    }
    return acc;
}

/// Extends the space with a fresh ancilla prepared pristine. Norm-preserving.
inline StateVector tensor_ancilla(const StateVector& s, const Ancilla& ancilla) {
    if (s.space().find_ancilla(ancilla.label)) {
        throw std::invalid_argument("ancilla '" + ancilla.label + "' already present");
    }
    std::vector<Mode> modes;
    for (uint32_t i = 0; i < s.space().mode_count(); ++i) modes.push_back(s.space().mode(ModeId{i}));
    std::vector<Ancilla> ancillas;
    for (uint32_t i = 0; i < s.space().ancilla_count(); ++i) {
        ancillas.push_back(s.space().ancilla(AncillaId{i}));
    }
    ancillas.push_back(ancilla);
    auto space = std::make_shared<const FockSpace>(std::move(modes), std::move(ancillas));
    StateVector::AmplitudeMap amps;
    for (const auto& [c, a] : s.amplitudes()) amps[c] = a;  // new ancilla bit stays 0
    return StateVector(std::move(space), std::move(amps));
}

inline bool approx_equal(const StateVector& a, const StateVector& b, double tol = kTol) {
    return (a - b).norm() <= tol;
}

/// Equality modulo a global phase; zero vectors compare equal only to zero.
inline bool approx_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = kTol) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na <= tol || nb <= tol) return std::abs(na - nb) <= tol;
    const Amplitude ov = inner_product(a, b);
    if (std::abs(ov) <= tol * na * nb) return false;
    const Amplitude phase = ov / std::abs(ov);
    return (a * phase - b).norm() <= tol;
}

}  // namespace interfersim

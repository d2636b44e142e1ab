// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace interfersim {

/// Index of a fermionic mode inside a FockSpace. The numeric value fixes the
/// Jordan-Wigner ordering used for all operator signs.
struct ModeId {
    uint32_t value = 0;
    auto operator<=>(const ModeId&) const = default;
};

/// Index of a two-level environment ancilla inside a FockSpace.
struct AncillaId {
    uint32_t value = 0;
    auto operator<=>(const AncillaId&) const = default;
};

struct Mode {
    std::string label;
};

/// Two-level environment record. Basis index 0 is the pristine state, index 1
/// the component of the scattered state orthogonal to it. `scattered_overlap`
/// is |<pristine|scattered>|; 0 reproduces a perfect which-path marker.
struct Ancilla {
    std::string label;
    double scattered_overlap = 0.0;
};

/// One occupation pattern over the modes of a space plus one basis index per
/// ancilla. Bit i of `mode_bits` is the occupation of mode i; bit j of
/// `ancilla_bits` is the basis index of ancilla j.
struct BasisConfig {
    uint64_t mode_bits = 0;
    uint64_t ancilla_bits = 0;
    auto operator<=>(const BasisConfig&) const = default;
};

/// Immutable layout of an experiment's Hilbert space: labeled modes in
/// Jordan-Wigner order plus labeled ancillas. Shared by every StateVector
/// that lives in it.
class FockSpace {
  public:
    FockSpace(std::vector<Mode> modes, std::vector<Ancilla> ancillas = {})
        : modes_(std::move(modes)), ancillas_(std::move(ancillas)) {
        if (modes_.size() > 64 || ancillas_.size() > 64) {
            throw std::invalid_argument("FockSpace supports at most 64 modes and 64 ancillas");
        }
        for (size_t i = 0; i < modes_.size(); ++i) {
            for (size_t j = i + 1; j < modes_.size(); ++j) {
                if (modes_[i].label == modes_[j].label) {
                    throw std::invalid_argument("duplicate mode label '" + modes_[i].label + "'");
                }
            }
        }
        for (size_t i = 0; i < ancillas_.size(); ++i) {
            if (ancillas_[i].scattered_overlap < 0.0 || ancillas_[i].scattered_overlap > 1.0) {
                throw std::invalid_argument("scattered overlap must lie in [0,1]");
            }
            for (size_t j = i + 1; j < ancillas_.size(); ++j) {
                if (ancillas_[i].label == ancillas_[j].label) {
                    throw std::invalid_argument("duplicate ancilla label '" + ancillas_[i].label + "'");
                }
            }
        }
    }

    static std::shared_ptr<const FockSpace> make(std::vector<std::string> mode_labels,
                                                 std::vector<Ancilla> ancillas = {}) {
        std::vector<Mode> modes;
        modes.reserve(mode_labels.size());
        for (auto& l : mode_labels) modes.push_back(Mode{std::move(l)});
        return std::make_shared<const FockSpace>(std::move(modes), std::move(ancillas));
    }

    size_t mode_count() const { return modes_.size(); }
    size_t ancilla_count() const { return ancillas_.size(); }

    const Mode& mode(ModeId id) const {
        require_mode(id);
        return modes_[id.value];
    }
    const Ancilla& ancilla(AncillaId id) const {
        require_ancilla(id);
        return ancillas_[id.value];
    }

    std::optional<ModeId> find_mode(std::string_view label) const {
        for (uint32_t i = 0; i < modes_.size(); ++i) {
            if (modes_[i].label == label) return ModeId{i};
        }
        return std::nullopt;
    }
    std::optional<AncillaId> find_ancilla(std::string_view label) const {
        for (uint32_t i = 0; i < ancillas_.size(); ++i) {
            if (ancillas_[i].label == label) return AncillaId{i};
        }
        return std::nullopt;
    }

    ModeId mode_id(std::string_view label) const {
        if (auto id = find_mode(label)) return *id;
        throw std::invalid_argument("unknown mode '" + std::string(label) + "'");
    }
    AncillaId ancilla_id(std::string_view label) const {
        if (auto id = find_ancilla(label)) return *id;
        throw std::invalid_argument("unknown ancilla '" + std::string(label) + "'");
    }

    void require_mode(ModeId id) const {
        if (id.value >= modes_.size()) throw std::invalid_argument("mode index out of range");
    }
    void require_ancilla(AncillaId id) const {
        if (id.value >= ancillas_.size()) throw std::invalid_argument("ancilla index out of range");
    }

    /// True when both spaces have identical mode/ancilla labels and overlaps.
    bool same_layout(const FockSpace& other) const {
        if (modes_.size() != other.modes_.size() || ancillas_.size() != other.ancillas_.size()) {
            return false;
        }
        for (size_t i = 0; i < modes_.size(); ++i) {
            if (modes_[i].label != other.modes_[i].label) return false;
        }
        for (size_t i = 0; i < ancillas_.size(); ++i) {
            if (ancillas_[i].label != other.ancillas_[i].label ||
                ancillas_[i].scattered_overlap != other.ancillas_[i].scattered_overlap) {
                return false;
            }
        }
        return true;
    }

    uint64_t mode_mask() const {
        return modes_.size() == 64 ? ~uint64_t{0} : ((uint64_t{1} << modes_.size()) - 1);
    }
    uint64_t ancilla_mask() const {
        return ancillas_.size() == 64 ? ~uint64_t{0} : ((uint64_t{1} << ancillas_.size()) - 1);
    }

    bool contains(const BasisConfig& c) const {
        return (c.mode_bits & ~mode_mask()) == 0 && (c.ancilla_bits & ~ancilla_mask()) == 0;
    }

  private:
    std::vector<Mode> modes_;
    std::vector<Ancilla> ancillas_;
};

}  // namespace interfersim

// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "interfersim/fock/state.hpp"

namespace interfersim {

enum class SlotKind : uint8_t {
    AbsorbingClick,         // clicked / silent
    AncillaComputational,   // pristine / scattered
    AncillaPlusMinusJoint,  // plus / minus / null
};

/// Outcome values grouped by slot kind; within one slot only values of its
/// kind occur, so the enum order doubles as the canonical sort order.
enum class Outcome : uint8_t {
    Silent = 0,
    Clicked = 1,
    Pristine = 2,
    Scattered = 3,
    Plus = 4,
    Minus = 5,
    Null = 6,  // outside the plus/minus span (no or both records scattered)
};

/// One measured quantity in a joint outcome record.
struct PatternSlot {
    SlotKind kind = SlotKind::AbsorbingClick;
    std::string label;                // detector label ("C", "B1", "B1B2")
    ModeId mode{};                    // click slots
    std::vector<AncillaId> ancillas;  // readout slots (1 or 2 entries)
    int64_t time = 0;
};

/// Ordered slot list shared by every pattern of one distribution: click slots
/// in click-time order first, then readout slots in readout-time order.
struct PatternSchema {
    std::vector<PatternSlot> slots;

    std::optional<size_t> find(std::string_view label) const {
        for (size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].label == label) return i;
        }
        return std::nullopt;
    }
};

/// Joint record of one outcome per schema slot.
class ClickPattern {
  public:
    ClickPattern(std::shared_ptr<const PatternSchema> schema, std::vector<Outcome> outcomes)
        : schema_(std::move(schema)), outcomes_(std::move(outcomes)) {
        if (!schema_ || outcomes_.size() != schema_->slots.size()) {
            throw std::invalid_argument("pattern outcomes do not match the schema");
        }
    }

    const PatternSchema& schema() const { return *schema_; }
    const std::shared_ptr<const PatternSchema>& schema_ptr() const { return schema_; }
    const std::vector<Outcome>& outcomes() const { return outcomes_; }

    Outcome outcome_of(std::string_view label) const {
        if (auto i = schema_->find(label)) return outcomes_[*i];
        throw std::invalid_argument("no outcome recorded for detector '" + std::string(label) +
                                    "'");
    }
    bool clicked(std::string_view label) const { return outcome_of(label) == Outcome::Clicked; }

    size_t clicked_count() const {
        size_t n = 0;
        for (size_t i = 0; i < outcomes_.size(); ++i) {
            if (schema_->slots[i].kind == SlotKind::AbsorbingClick &&
                outcomes_[i] == Outcome::Clicked) {
                ++n;
            }
        }
        return n;
    }

    /// Canonical text form: clicked detector labels in click-time order ("0"
    /// when nothing clicked), then "_<label>" per scattered computational
    /// record and "_plus"/"_minus"/"_null" per joint readout.
    std::string render() const { return render_stripped({}); }

    std::string render_stripped(const std::set<std::string>& skip_clicked) const {
        std::string clicks;
        std::string suffixes;
        for (size_t i = 0; i < outcomes_.size(); ++i) {
            const auto& slot = schema_->slots[i];
            switch (slot.kind) {
                case SlotKind::AbsorbingClick:
                    if (outcomes_[i] == Outcome::Clicked && !skip_clicked.count(slot.label)) {
                        clicks += slot.label;
                    }
                    break;
                case SlotKind::AncillaComputational:
                    if (outcomes_[i] == Outcome::Scattered) suffixes += "_" + slot.label;
                    break;
                case SlotKind::AncillaPlusMinusJoint:
                    suffixes += outcomes_[i] == Outcome::Plus    ? "_plus"
                                : outcomes_[i] == Outcome::Minus ? "_minus"
                                                                 : "_null";
                    break;
            }
        }
        if (clicks.empty() && suffixes.empty()) return "0";
        if (clicks.empty()) return suffixes.substr(1);  // drop the leading '_'
        return clicks + suffixes;
    }

    friend bool operator==(const ClickPattern& a, const ClickPattern& b) {
        return a.outcomes_ == b.outcomes_;
    }

  private:
    std::shared_ptr<const PatternSchema> schema_;
    std::vector<Outcome> outcomes_;
};

struct OutcomeEntry {
    ClickPattern pattern;
    double probability = 0.0;
    std::optional<StateVector> post_state;
};

/// Born-rule outcome table: nonzero-probability patterns sorted canonically,
/// probabilities summing to one, post states normalized.
class OutcomeDistribution {
  public:
    static OutcomeDistribution make(std::shared_ptr<const PatternSchema> schema,
                                    std::vector<OutcomeEntry> entries) {
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return a.pattern.outcomes() < b.pattern.outcomes();
        });
        double total = 0.0;
        for (size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (e.pattern.outcomes().size() != schema->slots.size()) {
                throw std::invalid_argument("pattern does not match distribution schema");
            }
            if (e.probability < 0.0) throw std::invalid_argument("negative outcome probability");
            if (i > 0 && entries[i - 1].pattern == e.pattern) {
                throw std::invalid_argument("duplicate outcome pattern");
            }
            if (e.post_state && std::abs(e.post_state->squared_norm() - 1.0) > kTol) {
                throw std::invalid_argument("post-measurement state is not normalized");
            }
            total += e.probability;
        }
        if (std::abs(total - 1.0) > kTol) {
            throw std::invalid_argument("outcome probabilities do not sum to 1");
        }
        return OutcomeDistribution(std::move(schema), std::move(entries));
    }

    const std::shared_ptr<const PatternSchema>& schema_ptr() const { return schema_; }
    const PatternSchema& schema() const { return *schema_; }
    const std::vector<OutcomeEntry>& entries() const { return entries_; }

    double total() const {
        double t = 0.0;
        for (const auto& e : entries_) t += e.probability;
        return t;
    }

    /// Sum of probabilities over patterns accepted by the predicate; 0 when
    /// nothing matches (absent patterns have probability 0).
    double probability_of(const std::function<bool(const ClickPattern&)>& predicate) const {
        double p = 0.0;
        for (const auto& e : entries_) {
            if (predicate(e.pattern)) p += e.probability;
        }
        return p;
    }

    const OutcomeEntry* find_pattern(const std::vector<Outcome>& outcomes) const {
        for (const auto& e : entries_) {
            if (e.pattern.outcomes() == outcomes) return &e;
        }
        return nullptr;
    }

  private:
    OutcomeDistribution(std::shared_ptr<const PatternSchema> schema,
                        std::vector<OutcomeEntry> entries)
        : schema_(std::move(schema)), entries_(std::move(entries)) {}

    std::shared_ptr<const PatternSchema> schema_;
    std::vector<OutcomeEntry> entries_;
};

/// Half the L1 distance between two distributions over the same schema.
inline double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
    if (a.schema().slots.size() != b.schema().slots.size()) {
        throw std::invalid_argument("distributions have different schemas");
    }
    double acc = 0.0;
    for (const auto& e : a.entries()) {
        const auto* other = b.find_pattern(e.pattern.outcomes());
        acc += std::abs(e.probability - (other ? other->probability : 0.0));
    }
    for (const auto& e : b.entries()) {
        if (!a.find_pattern(e.pattern.outcomes())) acc += e.probability;
    }
    return 0.5 * acc;
}

}  // namespace interfersim

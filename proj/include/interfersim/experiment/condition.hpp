// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "interfersim/measure/outcome.hpp"

namespace interfersim {

/// Comma-separated conjunction of outcome requirements, e.g. "C", "C,D",
/// "C,D,minus", "!E". A token naming an absorbing detector requires its
/// click ("!" prefix: silence); a token naming a computational record
/// requires it scattered; plus/minus/null constrain the joint readout.
///
/// Conditions that require at least one click are additionally closed over
/// full coincidence: every emitted particle must have landed in an absorbing
/// detector. This is what conditioning on "a detection at C" means in a
/// coincidence experiment; without it the undetected-port branch would
/// dilute the conditional statistics.
class Condition {
  public:
    struct Token {
        bool negated = false;
        std::string name;
    };

    Condition() = default;

    static Condition parse(std::string_view text) {
        Condition cond;
        cond.text_ = std::string(text);
        size_t pos = 0;
        while (pos <= text.size() && !text.empty()) {
            size_t comma = text.find(',', pos);
            if (comma == std::string_view::npos) comma = text.size();
            auto piece = text.substr(pos, comma - pos);
            while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
            while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
            if (piece.empty()) throw std::invalid_argument("empty token in condition");
            Token tok;
            if (piece.front() == '!') {
                tok.negated = true;
                piece.remove_prefix(1);
                if (piece.empty()) throw std::invalid_argument("empty token in condition");
            }
            tok.name = std::string(piece);
            cond.tokens_.push_back(std::move(tok));
            if (comma == text.size()) break;
            pos = comma + 1;
        }
        return cond;
    }

    bool empty() const { return tokens_.empty(); }
    const std::string& text() const { return text_; }
    const std::vector<Token>& tokens() const { return tokens_; }

    /// Clicked-detector labels this condition requires (used to shorten
    /// column names of conditional tables).
    std::set<std::string> required_clicks(const PatternSchema& schema) const {
        std::set<std::string> out;
        for (const auto& tok : tokens_) {
            if (tok.negated) continue;
            if (auto slot = schema.find(tok.name)) {
                if (schema.slots[*slot].kind == SlotKind::AbsorbingClick) out.insert(tok.name);
            }
        }
        return out;
    }

    /// Compact text used in "given" column suffixes: token names joined,
    /// negations spelled "not".
    std::string suffix() const {
        std::string out;
        for (const auto& tok : tokens_) {
            if (tok.negated) out += "not";
            out += tok.name;
        }
        return out;
    }

    std::function<bool(const ClickPattern&)> matcher(const PatternSchema& schema,
                                                     uint32_t particle_count) const {
        struct Requirement {
            size_t slot;
            Outcome outcome;
            bool negated;
        };
        std::vector<Requirement> requirements;
        bool any_click_required = false;
        size_t click_slots = 0;
        for (const auto& slot : schema.slots) {
            if (slot.kind == SlotKind::AbsorbingClick) ++click_slots;
        }

        for (const auto& tok : tokens_) {
            if (tok.name == "plus" || tok.name == "minus" || tok.name == "null") {
                const Outcome want = tok.name == "plus"    ? Outcome::Plus
                                     : tok.name == "minus" ? Outcome::Minus
                                                           : Outcome::Null;
                bool found = false;
                for (size_t i = 0; i < schema.slots.size(); ++i) {
                    if (schema.slots[i].kind == SlotKind::AncillaPlusMinusJoint) {
                        requirements.push_back({i, want, tok.negated});
                        found = true;
                    }
                }
                if (!found) {
                    throw std::invalid_argument(
                        "condition token '" + tok.name +
                        "' needs a plus/minus readout in the experiment");
                }
                continue;
            }
            auto slot = schema.find(tok.name);
            if (!slot) {
                throw std::invalid_argument("unknown detector '" + tok.name + "' in condition");
            }
            switch (schema.slots[*slot].kind) {
                case SlotKind::AbsorbingClick:
                    requirements.push_back({*slot, Outcome::Clicked, tok.negated});
                    if (!tok.negated) any_click_required = true;
                    break;
                case SlotKind::AncillaComputational:
                    requirements.push_back({*slot, Outcome::Scattered, tok.negated});
                    break;
                case SlotKind::AncillaPlusMinusJoint:
                    throw std::invalid_argument("joint readout '" + tok.name +
                                                "' must be matched with plus/minus/null");
            }
        }

        const size_t full_coincidence =
            std::min<size_t>(particle_count, click_slots);
        const bool require_coincidence = any_click_required;
        return [requirements, require_coincidence, full_coincidence](const ClickPattern& p) {
            for (const auto& req : requirements) {
                const bool match = p.outcomes()[req.slot] == req.outcome;
                if (match == req.negated) return false;
            }
            if (require_coincidence && p.clicked_count() != full_coincidence) return false;
            return true;
        };
    }

  private:
    std::vector<Token> tokens_;
    std::string text_;
};

}  // namespace interfersim

// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace interfersim {

enum class Severity { Error, Warning };

/// One validation or parse finding, pointing at a 1-based line/column of the
/// source text (0/0 for programmatically built graphs).
struct Diagnostic {
    Severity severity = Severity::Error;
    int line = 0;
    int column = 0;
    std::string message;
    std::string token;

    std::string format(std::string_view filename) const {
        std::string out{filename};
        out += ":" + std::to_string(line) + ":" + std::to_string(column) + ": ";
        out += severity == Severity::Error ? "error: " : "warning: ";
        out += message;
        return out;
    }
};

}  // namespace interfersim

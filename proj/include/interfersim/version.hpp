// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace interfersim {

inline constexpr std::string_view kVersion = "0.1.0";

// Identifies the sign/port conventions baked into this build: 50/50 splitters
// act as [[1,1],[1,-1]]/sqrt(2) on (inA,inB), and creation-operator signs
// follow ascending-index normal ordering. Which output port of the final
// splitter carries the cos^2 fringe depends on this id.
inline constexpr std::string_view kConventionId = "bs-sumdiff.jw-asc.v1";

// Numerical contract shared across the library.
inline constexpr double kTol = 1e-12;             // unitarity, norms, sums
inline constexpr double kPruneThreshold = 1e-15;  // amplitude debris cutoff
inline constexpr double kEigenvalueFloor = -1e-10;

}  // namespace interfersim

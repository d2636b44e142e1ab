// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "interfersim/cli/driver.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return interfersim::cli_main(args, std::cout, std::cerr);
}

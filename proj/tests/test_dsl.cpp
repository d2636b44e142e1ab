// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "interfersim/dsl/parse.hpp"
#include "interfersim/dsl/render.hpp"
#include "interfersim/experiment/builders.hpp"

using namespace interfersim;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string format_all(const ParseResult& result, std::string_view filename) {
    std::string out;
    for (const auto& d : result.diagnostics) out += d.format(filename) + "\n";
    return out;
}

}  // namespace

TEST_CASE("minimal program parses into the expected graph") {
    auto result = parse({"mode a\nsource S1 -> a\ndetector C on a time 1\n", "mini.ifx"});
    REQUIRE(result.ok());
    REQUIRE(result.diagnostics.empty());
    REQUIRE(result.graph->modes.size() == 1);
    REQUIRE(result.graph->sources.size() == 1);
    REQUIRE(result.graph->adetectors.size() == 1);
    REQUIRE(result.graph->adetectors[0].label == "C");
    REQUIRE(result.graph->adetectors[0].click_time == 1);
}

TEST_CASE("comments and blank lines are ignored") {
    auto result = parse({"# experiment\n\nmode a  # the only path\nsource S -> a\n"
                         "detector C on a time 1\n",
                         "c.ifx"});
    REQUIRE(result.ok());
    REQUIRE(result.graph->modes.size() == 1);
}

TEST_CASE("references to undeclared names are positioned diagnostics") {
    auto result = parse({"mode a\nphase bq 0.5 time 1\n", "x.ifx"});
    REQUIRE_FALSE(result.ok());
    REQUIRE(result.errors().size() == 1);
    const auto& d = *result.errors()[0];
    REQUIRE(d.line == 2);
    REQUIRE(d.column == 7);
    REQUIRE(d.message == "unknown mode 'bq'");
    REQUIRE(d.token == "bq");
}

TEST_CASE("a mode may feed only one absorbing detector") {
    auto result = parse({"mode a\nsource S1 -> a\ndetector C on a time 1\n"
                         "detector D on a time 2\n",
                         "twice.ifx"});
    REQUIRE_FALSE(result.ok());
    REQUIRE(result.errors().size() == 1);
    REQUIRE(result.errors()[0]->message == "mode 'a' consumed twice");
}

TEST_CASE("syntax problems name the offending token") {
    SECTION("unknown statement") {
        auto result = parse({"modes a\n", "s.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message == "unknown statement 'modes'");
    }
    SECTION("malformed number") {
        auto result = parse({"mode a\nancilla M overlap zero\n", "s.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message == "expected overlap value, got 'zero'");
    }
    SECTION("fractional time") {
        auto result = parse({"mode a\nphase a 0.5 time 1.5\n", "s.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message == "expected time, got '1.5'");
    }
    SECTION("trailing junk") {
        auto result = parse({"mode a extra\n", "s.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message == "unexpected token 'extra'");
    }
    SECTION("bad basis") {
        auto result = parse({"mode a\nancilla M overlap 0\nsource S -> a\n"
                             "ndetector B on a ancilla M interact 1 readout 2 basis bell\n",
                             "s.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message ==
                "expected 'computational' or 'plusminus', got 'bell'");
    }
}

TEST_CASE("timing rules are validated") {
    SECTION("readout must follow the interaction") {
        auto result = parse({"mode a\nancilla M overlap 0\nsource S -> a\n"
                             "ndetector B on a ancilla M interact 5 readout 5\n",
                             "t.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message ==
                "readout time must be greater than interaction time");
    }
    SECTION("click times must be distinct") {
        auto result = parse({"mode a\nmode b\nsource S -> a\n"
                             "detector C on a time 1\ndetector D on b time 1\n",
                             "t.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message == "duplicate click time 1");
    }
    SECTION("absorbed modes are gone") {
        auto result = parse({"mode a\nsource S -> a\ndetector C on a time 1\n"
                             "phase a 0.1 time 2\n",
                             "t.ifx"});
        REQUIRE_FALSE(result.ok());
        REQUIRE(result.errors()[0]->message == "mode 'a' used after absorption");
    }
}

TEST_CASE("unreferenced modes warn without failing the parse") {
    auto result = parse({"mode a\nmode z\nsource S -> a\ndetector C on a time 1\n", "w.ifx"});
    REQUIRE(result.ok());
    REQUIRE(result.diagnostics.size() == 1);
    REQUIRE(result.diagnostics[0].severity == Severity::Warning);
    REQUIRE(result.diagnostics[0].message == "unreferenced mode 'z'");
}

TEST_CASE("render and parse round-trip builder graphs") {
    const auto check_roundtrip = [](const ExperimentGraph& g) {
        auto result = parse({render(g), "rt.ifx"});
        REQUIRE(result.ok());
        REQUIRE(*result.graph == g);
    };
    check_roundtrip(build_part_a(0.3, 0.1, 0.0));
    check_roundtrip(build_part_a(1.25, -0.75, 0.5, ReadoutBasis::Computational));
    check_roundtrip(build_part_b(0.3, 0.1));
    check_roundtrip(build_part_b(0.0, 2.0 * M_PI));
}

TEST_CASE("shipped circuit files are the rendered builder graphs") {
    REQUIRE(read_file(std::filesystem::path(INTERFERSIM_CIRCUITS_DIR) / "partA.ifx") ==
            render(build_part_a(0.3, 0.1, 0.0)));
    REQUIRE(read_file(std::filesystem::path(INTERFERSIM_CIRCUITS_DIR) / "partB.ifx") ==
            render(build_part_b(0.3, 0.1)));
}

TEST_CASE("rendered marked interferometer declares exactly two ndetectors") {
    const auto text = render(build_part_a(0.3, 0.1, 0.0));
    size_t count = 0;
    size_t pos = 0;
    while ((pos = text.find("ndetector ", pos)) != std::string::npos) {
        ++count;
        pos += 10;
    }
    REQUIRE(count == 2);
}

TEST_CASE("parsing is deterministic") {
    const std::string text = render(build_part_a(0.7, 0.2, 0.25));
    auto a = parse({text, "d.ifx"});
    auto b = parse({text, "d.ifx"});
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    REQUIRE(*a.graph == *b.graph);
    REQUIRE(a.diagnostics.size() == b.diagnostics.size());

    auto bad = parse({"mode a\nphase bq 0.5 time 1\n", "d.ifx"});
    auto bad2 = parse({"mode a\nphase bq 0.5 time 1\n", "d.ifx"});
    REQUIRE(format_all(bad, "d.ifx") == format_all(bad2, "d.ifx"));
}

TEST_CASE("parser is total on fuzzed inputs") {
    std::mt19937_64 rng(2026);
    const std::string valid = render(build_part_a(0.3, 0.1, 0.0));
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> printable(32, 126);

    for (int trial = 0; trial < 1000; ++trial) {
        std::string input;
        const int flavor = trial % 3;
        if (flavor == 0) {  // raw bytes
            const size_t len = static_cast<size_t>(rng() % 200);
            for (size_t i = 0; i < len; ++i) {
                input.push_back(static_cast<char>(byte(rng)));
            }
        } else if (flavor == 1) {  // printable soup with newlines
            const size_t len = static_cast<size_t>(rng() % 300);
            for (size_t i = 0; i < len; ++i) {
                input.push_back(rng() % 7 ? static_cast<char>(printable(rng)) : '\n');
            }
        } else {  // mutated valid program
            input = valid;
            for (int k = 0; k < 8; ++k) {
                input[rng() % input.size()] = static_cast<char>(byte(rng));
            }
        }
        ParseResult result;
        REQUIRE_NOTHROW(result = parse({input, "fuzz.ifx"}));
        if (!result.ok()) {
            REQUIRE(!result.errors().empty());
        }
    }
}

TEST_CASE("golden diagnostics for the malformed corpus") {
    const std::filesystem::path dir{INTERFERSIM_TEST_DATA_DIR "/malformed"};
    for (int i = 1; i <= 5; ++i) {
        const std::string name = "m" + std::to_string(i) + ".ifx";
        CAPTURE(name);
        auto result = parse({read_file(dir / name), name});
        REQUIRE_FALSE(result.ok());
        REQUIRE(format_all(result, name) == read_file(dir / ("m" + std::to_string(i) +
                                                             ".expected")));
    }
}

TEST_CASE("parse_file reports unreadable paths as diagnostics") {
    auto result = parse_file("/nonexistent/file.ifx");
    REQUIRE_FALSE(result.ok());
    REQUIRE(result.errors()[0]->message == "cannot open file");
}

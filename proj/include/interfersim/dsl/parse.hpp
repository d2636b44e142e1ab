// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Line-oriented circuit description language (".ifx"):
//
//   mode NAME
//   ancilla NAME overlap FLOAT
//   source NAME -> MODE
//   beamsplitter NAME in MODE MODE out MODE MODE time INT
//   phase MODE FLOAT time INT
//   ndetector NAME on MODE ancilla NAME interact INT readout INT
//             [basis computational|plusminus]
//   detector NAME on MODE time INT
//
// '#' starts a comment, tokens are whitespace-separated, angles are radians,
// times are integer ordering keys. Parsing is total: malformed input comes
// back as positioned diagnostics, never as an exception.

#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "interfersim/diagnostics.hpp"
#include "interfersim/experiment/graph.hpp"

namespace interfersim {

struct SourceText {
    std::string text;
    std::string filename = "<input>";
};

struct ParseResult {
    std::optional<ExperimentGraph> graph;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return graph.has_value(); }
    std::vector<const Diagnostic*> errors() const {
        std::vector<const Diagnostic*> out;
        for (const auto& d : diagnostics) {
            if (d.severity == Severity::Error) out.push_back(&d);
        }
        return out;
    }
};

namespace dsl_detail {

struct Token {
    std::string text;
    int column = 1;  // 1-based byte offset
};

struct LineError {
    int column;
    std::string message;
    std::string token;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#') {
            ++i;
        }
        tokens.push_back(Token{std::string(line.substr(start, i - start)),
                               static_cast<int>(start) + 1});
    }
    return tokens;
}

class Cursor {
  public:
    explicit Cursor(const std::vector<Token>& tokens) : tokens_(tokens) {}

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& take(const std::string& what) {
        if (at_end()) {
            throw LineError{end_column(), "expected " + what, ""};
        }
        return tokens_[pos_++];
    }

    const Token& take_name(const std::string& what) {
        const Token& tok = take(what);
        if (!is_identifier(tok.text)) {
            throw LineError{tok.column, "expected " + what + ", got '" + tok.text + "'",
                            tok.text};
        }
        return tok;
    }

    void take_keyword(const std::string& keyword) {
        const Token& tok = take("'" + keyword + "'");
        if (tok.text != keyword) {
            throw LineError{tok.column, "expected '" + keyword + "', got '" + tok.text + "'",
                            tok.text};
        }
    }

    double take_number(const std::string& what) {
        const Token& tok = take(what);
        const char* begin = tok.text.c_str();
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end != begin + tok.text.size() || tok.text.empty()) {
            throw LineError{tok.column, "expected " + what + ", got '" + tok.text + "'",
                            tok.text};
        }
        return value;
    }

    int64_t take_int(const std::string& what) {
        const Token& tok = take(what);
        int64_t value = 0;
        const auto [ptr, ec] =
            std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
        if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size()) {
            throw LineError{tok.column, "expected " + what + ", got '" + tok.text + "'",
                            tok.text};
        }
        return value;
    }

    void expect_end() {
        if (!at_end()) {
            const Token& tok = tokens_[pos_];
            throw LineError{tok.column, "unexpected token '" + tok.text + "'", tok.text};
        }
    }

    int end_column() const {
        if (tokens_.empty()) return 1;
        if (pos_ < tokens_.size()) return tokens_[pos_].column;
        const Token& last = tokens_.back();
        return last.column + static_cast<int>(last.text.size());
    }

    static bool is_identifier(std::string_view s) {
        if (s.empty()) return false;
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
        for (const char c : s) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        }
        return true;
    }

  private:
    const std::vector<Token>& tokens_;
    size_t pos_ = 1;  // token 0 is the statement keyword
};

}  // namespace dsl_detail

/// Parses circuit text into a validated graph. All syntax and semantic
/// problems are reported as diagnostics with 1-based line/column positions;
/// the graph is present iff no error was found.
inline ParseResult parse(const SourceText& source) {
    using namespace dsl_detail;
    ParseResult result;
    ExperimentGraph graph;

    std::vector<std::string_view> lines;
    {
        std::string_view rest = source.text;
        while (!rest.empty()) {
            const size_t nl = rest.find('\n');
            std::string_view line = nl == std::string_view::npos ? rest : rest.substr(0, nl);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            if (nl == std::string_view::npos) break;
            rest.remove_prefix(nl + 1);
        }
    }

    for (size_t li = 0; li < lines.size(); ++li) {
        const int line_no = static_cast<int>(li) + 1;
        const auto tokens = tokenize(lines[li]);
        if (tokens.empty()) continue;
        const SourceLocation loc{line_no, tokens[0].column};
        Cursor cur(tokens);
        try {
            const std::string& keyword = tokens[0].text;
            const auto at = [&](const Token& tok) { return SourceLocation{line_no, tok.column}; };
            if (keyword == "mode") {
                const auto& name = cur.take_name("mode name");
                cur.expect_end();
                graph.modes.push_back(ModeDecl{name.text, at(name)});
            } else if (keyword == "ancilla") {
                const auto& name = cur.take_name("ancilla name");
                cur.take_keyword("overlap");
                const double overlap = cur.take_number("overlap value");
                cur.expect_end();
                graph.ancillas.push_back(AncillaDecl{name.text, overlap, at(name)});
            } else if (keyword == "source") {
                const auto& name = cur.take_name("source name");
                cur.take_keyword("->");
                const auto& mode = cur.take_name("mode name");
                cur.expect_end();
                graph.sources.push_back(SourceDecl{name.text, mode.text, "up", loc, at(mode)});
            } else if (keyword == "beamsplitter") {
                const auto& name = cur.take_name("beam splitter name");
                cur.take_keyword("in");
                const auto& in_a = cur.take_name("input mode");
                const auto& in_b = cur.take_name("input mode");
                cur.take_keyword("out");
                const auto& out_a = cur.take_name("output mode");
                const auto& out_b = cur.take_name("output mode");
                cur.take_keyword("time");
                const int64_t time = cur.take_int("time");
                cur.expect_end();
                graph.elements.push_back(BeamSplitterDecl{name.text, in_a.text, in_b.text,
                                                          out_a.text, out_b.text, time, loc,
                                                          at(in_a), at(in_b), at(out_a),
                                                          at(out_b)});
            } else if (keyword == "phase") {
                const auto& mode = cur.take_name("mode name");
                const double theta = cur.take_number("angle");
                cur.take_keyword("time");
                const int64_t time = cur.take_int("time");
                cur.expect_end();
                graph.elements.push_back(PhaseDecl{mode.text, theta, time, loc, at(mode)});
            } else if (keyword == "ndetector") {
                const auto& name = cur.take_name("detector name");
                cur.take_keyword("on");
                const auto& mode = cur.take_name("mode name");
                cur.take_keyword("ancilla");
                const auto& ancilla = cur.take_name("ancilla name");
                cur.take_keyword("interact");
                const int64_t interact = cur.take_int("interaction time");
                cur.take_keyword("readout");
                const int64_t readout = cur.take_int("readout time");
                ReadoutBasis basis = ReadoutBasis::Computational;
                if (!cur.at_end()) {
                    cur.take_keyword("basis");
                    const auto& tok = cur.take("'computational' or 'plusminus'");
                    if (tok.text == "computational") {
                        basis = ReadoutBasis::Computational;
                    } else if (tok.text == "plusminus") {
                        basis = ReadoutBasis::PlusMinusJoint;
                    } else {
                        throw LineError{tok.column,
                                        "expected 'computational' or 'plusminus', got '" +
                                            tok.text + "'",
                                        tok.text};
                    }
                }
                cur.expect_end();
                graph.ndetectors.push_back(NonAbsorbingDecl{name.text, mode.text, ancilla.text,
                                                            interact, readout, basis, loc,
                                                            at(mode), at(ancilla)});
            } else if (keyword == "detector") {
                const auto& name = cur.take_name("detector name");
                cur.take_keyword("on");
                const auto& mode = cur.take_name("mode name");
                cur.take_keyword("time");
                const int64_t time = cur.take_int("click time");
                cur.expect_end();
                graph.adetectors.push_back(AbsorbingDecl{name.text, mode.text, time, loc,
                                                         at(mode)});
            } else {
                throw LineError{tokens[0].column, "unknown statement '" + keyword + "'", keyword};
            }
        } catch (const LineError& e) {
            result.diagnostics.push_back(
                Diagnostic{Severity::Error, line_no, e.column, e.message, e.token});
        } catch (const std::exception& e) {
            result.diagnostics.push_back(
                Diagnostic{Severity::Error, line_no, tokens[0].column, e.what(), tokens[0].text});
        }
    }

    for (auto& d : graph.validate()) result.diagnostics.push_back(std::move(d));

    bool failed = false;
    for (const auto& d : result.diagnostics) {
        if (d.severity == Severity::Error) failed = true;
    }
    if (!failed) result.graph = std::move(graph);
    return result;
}

inline ParseResult parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult result;
        result.diagnostics.push_back(
            Diagnostic{Severity::Error, 0, 0, "cannot open file", path});
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(SourceText{buffer.str(), path});
}

}  // namespace interfersim

#pragma once

// Turning match outcomes into "file:line:col: syntax error, ..." messages.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "labelpeg/failure.hpp"
#include "labelpeg/grammar.hpp"

namespace labelpeg {

struct LineCol {
    std::size_t line;
    std::size_t column;

    friend auto operator<=>(const LineCol&, const LineCol&) = default;
};

/// 1-based line and column of a byte offset. Columns count bytes, so a tab
/// is one column.
inline LineCol line_col(std::string_view input, Position pos) {
    if (pos > input.size()) throw std::out_of_range("position beyond end of input");
    LineCol lc{1, 1};
    for (Position i = 0; i < pos; ++i) {
        if (input[i] == '\n') {
            ++lc.line;
            lc.column = 1;
        } else {
            ++lc.column;
        }
    }
    return lc;
}

/// Inverse of line_col for positions inside the input.
inline std::optional<Position> offset_of(std::string_view input, LineCol lc) {
    Position pos = 0;
    for (std::size_t line = 1; line < lc.line; ++line) {
        auto nl = input.find('\n', pos);
        if (nl == std::string_view::npos) return std::nullopt;
        pos = nl + 1;
    }
    Position off = pos + lc.column - 1;
    if (lc.column == 0 || off > input.size()) return std::nullopt;
    if (input.substr(pos, off - pos).find('\n') != std::string_view::npos) return std::nullopt;
    return off;
}

inline bool is_identifier_byte(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

/// What the input holds at `pos`: an identifier-like word, a single byte, or
/// "end of input".
inline std::string unexpected_lexeme(std::string_view input, Position pos) {
    if (pos > input.size()) throw std::out_of_range("position beyond end of input");
    if (pos == input.size()) return "end of input";
    Position end = pos;
    while (end < input.size() && is_identifier_byte(input[end])) ++end;
    if (end == pos) return escape_symbols(input.substr(pos, 1));
    return std::string(input.substr(pos, end - pos));
}

struct Diagnostic {
    std::string source;
    std::size_t line = 1;
    std::size_t column = 1;
    std::string unexpected;
    std::vector<std::string> expected;
    std::optional<Label> label;
    std::string message;
};

namespace detail {

inline Diagnostic locate(std::string_view source, std::string_view input, Position pos) {
    Diagnostic d;
    d.source = std::string(source);
    auto lc = line_col(input, pos);
    d.line = lc.line;
    d.column = lc.column;
    d.unexpected = unexpected_lexeme(input, pos);
    return d;
}

inline std::string prefix(const Diagnostic& d) {
    return d.source + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": syntax error";
}

}  // namespace detail

/// Position-only message: "name:l:c: syntax error, unexpected 'x'".
inline Diagnostic render_position(std::string_view source, std::string_view input, Position pos) {
    Diagnostic d = detail::locate(source, input, pos);
    d.message = detail::prefix(d) + ", unexpected '" + d.unexpected + "'";
    return d;
}

/// Message from an expected-list record. Items are listed most recently
/// recorded first.
inline Diagnostic render_ffl(std::string_view source, std::string_view input, const FailureRecord& record) {
    if (!record.at()) throw std::invalid_argument("render_ffl needs a record with a failure position");
    Diagnostic d = detail::locate(source, input, *record.at());
    for (auto it = record.expected().rbegin(); it != record.expected().rend(); ++it) d.expected.push_back(to_string(*it));
    d.message = detail::prefix(d) + ", unexpected '" + d.unexpected + "'";
    if (!d.expected.empty()) {
        d.message += ", expecting ";
        for (std::size_t i = 0; i < d.expected.size(); ++i) d.message += (i ? ", " : "") + d.expected[i];
    }
    return d;
}

/// Message for a label that escaped the start rule. The `fail` label falls
/// back to the farthest-failure record.
inline Diagnostic render_label(const Grammar& g, const Label& label, Position pos, std::string_view input,
                               std::string_view source, const FailureRecord& fallback) {
    if (label == fail_label) {
        Diagnostic d = fallback.at() ? render_ffl(source, input, fallback) : render_position(source, input, pos);
        d.label = label;
        return d;
    }
    Diagnostic d = detail::locate(source, input, pos);
    d.label = label;
    if (auto m = g.message(label)) d.message = detail::prefix(d) + ", " + *m;
    else d.message = detail::prefix(d) + " [" + label.name + "]";
    return d;
}

}  // namespace labelpeg

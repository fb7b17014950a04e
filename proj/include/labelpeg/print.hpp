#pragma once

// Pretty-printing of expressions and grammars in the textual grammar format.
// The output re-parses to a structurally identical tree.

#include <sstream>
#include <string>

#include "labelpeg/grammar.hpp"

namespace labelpeg {

namespace detail {

enum Precedence { prec_choice = 0, prec_sequence = 1, prec_prefix = 2, prec_postfix = 3 };

inline std::string quote_symbols(std::string_view s, char quote) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(1, quote);
    for (unsigned char c : s) {
        if (c == static_cast<unsigned char>(quote) || c == '\\') {
            out += '\\';
            out += static_cast<char>(c);
        } else if (c == '\n') {
            out += "\\n";
        } else if (c == '\t') {
            out += "\\t";
        } else if (c == '\r') {
            out += "\\r";
        } else if (c < 0x20 || c >= 0x7f) {
            out += "\\x";
            out += hex[c >> 4];
            out += hex[c & 0xf];
        } else {
            out += static_cast<char>(c);
        }
    }
    out += quote;
    return out;
}

inline std::string class_symbol(unsigned c) {
    static constexpr char hex[] = "0123456789abcdef";
    if (c == ']' || c == '\\' || c == '-' || c == '[' || c == '^') return std::string("\\") + static_cast<char>(c);
    if (c == '\n') return "\\n";
    if (c == '\t') return "\\t";
    if (c == '\r') return "\\r";
    if (c < 0x20 || c >= 0x7f) return std::string("\\x") + hex[c >> 4] + hex[c & 0xf];
    return std::string(1, static_cast<char>(c));
}

/// Bracket form of a symbol set, collapsing runs into ranges.
inline std::string class_text(const std::bitset<256>& members) {
    std::string out = "[";
    for (unsigned c = 0; c < 256;) {
        if (!members.test(c)) {
            ++c;
            continue;
        }
        unsigned end = c;
        while (end + 1 < 256 && members.test(end + 1)) ++end;
        out += class_symbol(c);
        if (end > c + 1) out += "-" + class_symbol(end);
        else if (end == c + 1) out += class_symbol(end);
        c = end + 1;
    }
    return out + "]";
}

inline std::string labels_text(const LabelSet& s) {
    std::string out;
    for (const auto& l : s) {
        if (!out.empty()) out += ",";
        out += l.name;
    }
    return out;
}

inline std::string print(const Expression& e, int ctx) {
    return std::visit(
        [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Empty>) {
                return "e";
            } else if constexpr (std::is_same_v<T, expr::Terminal>) {
                return quote_symbols(std::string(1, static_cast<char>(x.ch)), '\'');
            } else if constexpr (std::is_same_v<T, expr::Any>) {
                return ".";
            } else if constexpr (std::is_same_v<T, expr::Literal>) {
                return quote_symbols(x.text, '"');
            } else if constexpr (std::is_same_v<T, expr::Class>) {
                bool bracketed = x.name.size() >= 2 && x.name.front() == '[' && x.name.back() == ']';
                return bracketed ? x.name : class_text(x.members);
            } else if constexpr (std::is_same_v<T, expr::NonTerminal>) {
                return x.name;
            } else if constexpr (std::is_same_v<T, expr::Throw>) {
                return "^" + x.label.name;
            } else if constexpr (std::is_same_v<T, expr::Choice>) {
                std::string op = x.catches == LabelSet{fail_label} ? " / " : " /{" + labels_text(x.catches) + "} ";
                std::string s = print(*x.left, prec_choice) + op + print(*x.right, prec_sequence);
                return ctx > prec_choice ? "(" + s + ")" : s;
            } else if constexpr (std::is_same_v<T, expr::Sequence>) {
                std::string s = print(*x.left, prec_sequence) + " " + print(*x.right, prec_prefix);
                return ctx > prec_sequence ? "(" + s + ")" : s;
            } else if constexpr (std::is_same_v<T, expr::Not>) {
                std::string s = "!" + print(*x.body, prec_prefix);
                return ctx > prec_prefix ? "(" + s + ")" : s;
            } else {
                static_assert(std::is_same_v<T, expr::Star>);
                return print(*x.body, prec_postfix) + "*";
            }
        },
        e.node);
}

}  // namespace detail

inline std::string to_string(const Expression& e) { return detail::print(e, detail::prec_choice); }

/// Grammar file text: label declarations, then the start rule, then the
/// remaining rules in declaration order.
inline std::string to_string(const Grammar& g) {
    std::ostringstream os;
    for (const auto& l : g.labels()) {
        if (l == fail_label) continue;
        os << "label " << l.name;
        if (auto m = g.message(l)) os << " = " << detail::quote_symbols(*m, '"');
        os << "\n";
    }
    auto emit = [&](const Rule& r) {
        os << (r.lexical ? "lex " : "") << r.name << " <- " << to_string(*r.body) << "\n";
    };
    if (const Rule* s = g.find(g.start())) emit(*s);
    for (const auto& r : g.rules())
        if (r.name != g.start()) emit(r);
    return os.str();
}

}  // namespace labelpeg

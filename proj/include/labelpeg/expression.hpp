#pragma once

// Parsing expression AST.
//
// Expressions are immutable trees of shared nodes. Every combinator returns a
// fresh ExprPtr; subtrees may be shared freely between rules and grammars.

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace labelpeg {

/// A failure label. The distinguished label `fail` is produced by ordinary
/// mismatches and always belongs to every grammar's label set.
struct Label {
    std::string name;

    friend auto operator<=>(const Label&, const Label&) = default;
};

inline const Label fail_label{"fail"};

using LabelSet = std::set<Label>;

struct Expression;
using ExprPtr = std::shared_ptr<const Expression>;

namespace expr {

struct Empty {
    friend bool operator==(const Empty&, const Empty&) = default;
};

struct Terminal {
    unsigned char ch;
    friend bool operator==(const Terminal&, const Terminal&) = default;
};

struct Any {
    friend bool operator==(const Any&, const Any&) = default;
};

/// Multi-symbol token; matches all of `text` or fails at its start.
struct Literal {
    std::string text;
    friend bool operator==(const Literal&, const Literal&) = default;
};

/// One symbol drawn from `members`; `name` is what diagnostics print.
struct Class {
    std::bitset<256> members;
    std::string name;
    friend bool operator==(const Class&, const Class&) = default;
};

struct NonTerminal {
    std::string name;
    friend bool operator==(const NonTerminal&, const NonTerminal&) = default;
};

struct Sequence {
    ExprPtr left, right;
};

/// Ordered choice; `right` runs only when `left` raises a label in `catches`.
struct Choice {
    ExprPtr left, right;
    LabelSet catches;
};

struct Star {
    ExprPtr body;
};

struct Not {
    ExprPtr body;
};

struct Throw {
    Label label;
    friend bool operator==(const Throw&, const Throw&) = default;
};

}  // namespace expr

struct Expression {
    using Node = std::variant<expr::Empty, expr::Terminal, expr::Any, expr::Literal, expr::Class,
                              expr::NonTerminal, expr::Sequence, expr::Choice, expr::Star,
                              expr::Not, expr::Throw>;
    Node node;

    template <class T>
    [[nodiscard]] const T* as() const noexcept {
        return std::get_if<T>(&node);
    }
    template <class T>
    [[nodiscard]] bool is() const noexcept {
        return std::holds_alternative<T>(node);
    }
};

// Structural equality; shared subtrees compare by content.
inline bool operator==(const Expression& a, const Expression& b);

inline bool same(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline bool operator==(const Expression& a, const Expression& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, expr::Sequence>) {
                return same(x.left, y.left) && same(x.right, y.right);
            } else if constexpr (std::is_same_v<T, expr::Choice>) {
                return x.catches == y.catches && same(x.left, y.left) && same(x.right, y.right);
            } else if constexpr (std::is_same_v<T, expr::Star> || std::is_same_v<T, expr::Not>) {
                return same(x.body, y.body);
            } else {
                return x == y;
            }
        },
        a.node);
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {
inline ExprPtr make(Expression::Node n) {
    return std::make_shared<const Expression>(Expression{std::move(n)});
}
}  // namespace detail

inline ExprPtr empty() { return detail::make(expr::Empty{}); }
inline ExprPtr terminal(unsigned char c) { return detail::make(expr::Terminal{c}); }
inline ExprPtr any() { return detail::make(expr::Any{}); }

inline ExprPtr literal(std::string text) {
    if (text.empty()) throw std::invalid_argument("literal text must be non-empty");
    return detail::make(expr::Literal{std::move(text)});
}

inline ExprPtr char_class(std::bitset<256> members, std::string name) {
    return detail::make(expr::Class{members, std::move(name)});
}

/// Class from a list of inclusive ranges, e.g. {{'a','z'},{'0','9'}}.
inline ExprPtr char_class(std::initializer_list<std::pair<unsigned char, unsigned char>> ranges,
                          std::string name) {
    std::bitset<256> members;
    for (auto [lo, hi] : ranges)
        for (unsigned c = lo; c <= hi; ++c) members.set(c);
    return char_class(members, std::move(name));
}

inline ExprPtr nonterminal(std::string name) { return detail::make(expr::NonTerminal{std::move(name)}); }

inline ExprPtr seq(ExprPtr a, ExprPtr b) { return detail::make(expr::Sequence{std::move(a), std::move(b)}); }

/// Left-nested sequence of two or more expressions.
template <class... Rest>
ExprPtr seq(ExprPtr a, ExprPtr b, ExprPtr c, Rest... rest) {
    return seq(seq(std::move(a), std::move(b)), std::move(c), std::move(rest)...);
}

inline ExprPtr choice(ExprPtr a, ExprPtr b, LabelSet catches) {
    if (catches.empty()) throw std::invalid_argument("choice catch set must be non-empty");
    return detail::make(expr::Choice{std::move(a), std::move(b), std::move(catches)});
}

/// Default ordered choice, catching only `fail`.
inline ExprPtr choice(ExprPtr a, ExprPtr b) { return choice(std::move(a), std::move(b), LabelSet{fail_label}); }

template <class... Rest>
ExprPtr choice(ExprPtr a, ExprPtr b, ExprPtr c, Rest... rest) {
    return choice(choice(std::move(a), std::move(b)), std::move(c), std::move(rest)...);
}

inline ExprPtr star(ExprPtr body) { return detail::make(expr::Star{std::move(body)}); }
inline ExprPtr not_(ExprPtr body) { return detail::make(expr::Not{std::move(body)}); }
inline ExprPtr and_(ExprPtr body) { return not_(not_(std::move(body))); }
inline ExprPtr throw_(Label l) { return detail::make(expr::Throw{std::move(l)}); }
inline ExprPtr throw_(std::string l) { return throw_(Label{std::move(l)}); }

/// `[p]^l`, i.e. p / ^l.
inline ExprPtr expect(ExprPtr p, Label l) { return choice(std::move(p), throw_(std::move(l))); }

// ---------------------------------------------------------------------------

/// Calls `f` on every node of the tree, parents before children.
template <class F>
void for_each_node(const Expression& e, F&& f) {
    f(e);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Sequence> || std::is_same_v<T, expr::Choice>) {
                for_each_node(*x.left, f);
                for_each_node(*x.right, f);
            } else if constexpr (std::is_same_v<T, expr::Star> || std::is_same_v<T, expr::Not>) {
                for_each_node(*x.body, f);
            }
        },
        e.node);
}

inline std::size_t depth(const Expression& e) {
    return std::visit(
        [](const auto& x) -> std::size_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Sequence> || std::is_same_v<T, expr::Choice>) {
                return 1 + std::max(depth(*x.left), depth(*x.right));
            } else if constexpr (std::is_same_v<T, expr::Star> || std::is_same_v<T, expr::Not>) {
                return 1 + depth(*x.body);
            } else {
                return 1;
            }
        },
        e.node);
}

}  // namespace labelpeg

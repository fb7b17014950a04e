#pragma once

// Farthest-failure bookkeeping shared by the tracking matchers.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace labelpeg {

/// Byte offset into the input. A larger offset is a shorter remaining
/// suffix, hence a farther failure.
using Position = std::size_t;

struct TerminalItem {
    unsigned char ch;
    friend bool operator==(const TerminalItem&, const TerminalItem&) = default;
};
struct LiteralItem {
    std::string text;
    friend bool operator==(const LiteralItem&, const LiteralItem&) = default;
};
struct ClassItem {
    std::string name;
    friend bool operator==(const ClassItem&, const ClassItem&) = default;
};
/// A rule blamed as a whole. `display` is the token text of a lexical rule
/// (printed quoted); when empty the rule name is printed bare.
struct NonTerminalItem {
    std::string name;
    std::string display;
    friend bool operator==(const NonTerminalItem&, const NonTerminalItem&) = default;
};
struct PredicateItem {
    std::string text;
    friend bool operator==(const PredicateItem&, const PredicateItem&) = default;
};

using ExpectedItem = std::variant<TerminalItem, LiteralItem, ClassItem, NonTerminalItem, PredicateItem>;

inline std::string escape_symbols(std::string_view s) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\\': out += "\\\\"; break;
            default:
                if (c < 0x20 || c == 0x7f) {
                    out += "\\x";
                    out += hex[c >> 4];
                    out += hex[c & 0xf];
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

/// Text of an item as it appears after "expecting".
inline std::string to_string(const ExpectedItem& item) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TerminalItem>) {
                return "'" + escape_symbols(std::string(1, static_cast<char>(x.ch))) + "'";
            } else if constexpr (std::is_same_v<T, LiteralItem>) {
                return "'" + escape_symbols(x.text) + "'";
            } else if constexpr (std::is_same_v<T, ClassItem>) {
                return x.name;
            } else if constexpr (std::is_same_v<T, NonTerminalItem>) {
                return x.display.empty() ? x.name : "'" + escape_symbols(x.display) + "'";
            } else {
                return x.text;
            }
        },
        item);
}

/// Farthest failure position plus what was expected there. Either both
/// parts are present or neither is: an empty record means no failure.
class FailureRecord {
public:
    FailureRecord() = default;

    FailureRecord(Position at, ExpectedItem item) : at_(at), expected_{std::move(item)} {}

    FailureRecord(Position at, std::vector<ExpectedItem> items) : at_(at) {
        if (items.empty()) throw std::invalid_argument("a failure record needs at least one expected item");
        for (auto& i : items) add(std::move(i));
    }

    [[nodiscard]] const std::optional<Position>& at() const noexcept { return at_; }
    [[nodiscard]] const std::vector<ExpectedItem>& expected() const noexcept { return expected_; }
    [[nodiscard]] bool empty() const noexcept { return !at_.has_value(); }

    friend bool operator==(const FailureRecord&, const FailureRecord&) = default;

    friend FailureRecord join(FailureRecord a, const FailureRecord& b);

private:
    void add(ExpectedItem item) {
        if (std::find(expected_.begin(), expected_.end(), item) == expected_.end())
            expected_.push_back(std::move(item));
    }

    std::optional<Position> at_;
    std::vector<ExpectedItem> expected_;
};

/// The farther of two optional failure positions.
inline std::optional<Position> smallest(std::optional<Position> a, std::optional<Position> b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}

/// Keeps the farther record; equal positions merge their lists, `a` first.
inline FailureRecord join(FailureRecord a, const FailureRecord& b) {
    if (b.empty()) return a;
    if (a.empty() || *b.at_ > *a.at_) return b;
    if (*a.at_ > *b.at_) return a;
    for (const auto& i : b.expected_) a.add(i);
    return a;
}

/// Blames rule `name` when its body's farthest failure is where the rule
/// started; otherwise passes the record through.
inline FailureRecord join_var(const FailureRecord& r, Position rule_start, const std::string& name,
                              std::string display = {}) {
    if (r.at() && *r.at() == rule_start) return FailureRecord(rule_start, NonTerminalItem{name, std::move(display)});
    return r;
}

}  // namespace labelpeg

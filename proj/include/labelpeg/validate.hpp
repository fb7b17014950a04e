#pragma once

// Well-formedness checks. A grammar that validates cleanly has no rule that
// can re-enter itself without consuming input and no repetition whose body
// can succeed on empty input, so every matcher terminates on finite input.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "labelpeg/grammar.hpp"

namespace labelpeg {

enum class IssueKind { unknown_nonterminal, undeclared_label, left_recursion, nullable_star_body, empty_grammar };

inline std::string_view to_string(IssueKind k) {
    switch (k) {
        case IssueKind::unknown_nonterminal: return "unknown-nonterminal";
        case IssueKind::undeclared_label: return "undeclared-label";
        case IssueKind::left_recursion: return "left-recursion";
        case IssueKind::nullable_star_body: return "nullable-star-body";
        case IssueKind::empty_grammar: return "empty-grammar";
    }
    return "?";
}

struct ValidationIssue {
    IssueKind kind;
    std::string rule;
    std::string detail;

    friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

/// The kinds of result an expression can produce on some input: succeed
/// without consuming, succeed consuming, or raise one of `raises`.
struct Outcomes {
    bool empty = false;
    bool consume = false;
    LabelSet raises;

    [[nodiscard]] bool can_raise(const Label& l) const { return raises.count(l) != 0; }
    [[nodiscard]] bool can_succeed() const { return empty || consume; }

    friend bool operator==(const Outcomes&, const Outcomes&) = default;
};

namespace detail {

using OutcomeTable = std::map<std::string, Outcomes>;

inline Outcomes analyze(const Expression& e, const OutcomeTable& table) {
    return std::visit(
        [&](const auto& x) -> Outcomes {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Empty>) {
                return {true, false, {}};
            } else if constexpr (std::is_same_v<T, expr::Terminal> || std::is_same_v<T, expr::Any> ||
                                 std::is_same_v<T, expr::Literal>) {
                return {false, true, {fail_label}};
            } else if constexpr (std::is_same_v<T, expr::Class>) {
                return {false, x.members.any(), {fail_label}};
            } else if constexpr (std::is_same_v<T, expr::NonTerminal>) {
                auto it = table.find(x.name);
                return it == table.end() ? Outcomes{} : it->second;
            } else if constexpr (std::is_same_v<T, expr::Sequence>) {
                Outcomes l = analyze(*x.left, table);
                Outcomes r = analyze(*x.right, table);
                Outcomes out;
                out.empty = l.empty && r.empty;
                out.consume = (l.consume && r.can_succeed()) || (l.empty && r.consume);
                out.raises = l.raises;
                if (l.can_succeed()) out.raises.insert(r.raises.begin(), r.raises.end());
                return out;
            } else if constexpr (std::is_same_v<T, expr::Choice>) {
                Outcomes l = analyze(*x.left, table);
                Outcomes r = analyze(*x.right, table);
                bool caught = false;
                Outcomes out;
                for (const auto& lab : l.raises) {
                    if (x.catches.count(lab)) caught = true;
                    else out.raises.insert(lab);
                }
                out.empty = l.empty || (caught && r.empty);
                out.consume = l.consume || (caught && r.consume);
                if (caught) out.raises.insert(r.raises.begin(), r.raises.end());
                return out;
            } else if constexpr (std::is_same_v<T, expr::Star>) {
                Outcomes b = analyze(*x.body, table);
                Outcomes out;
                bool stops = b.can_raise(fail_label);
                out.empty = stops;
                out.consume = b.consume && stops;
                out.raises = b.raises;
                out.raises.erase(fail_label);
                return out;
            } else if constexpr (std::is_same_v<T, expr::Not>) {
                Outcomes b = analyze(*x.body, table);
                Outcomes out;
                out.empty = b.can_raise(fail_label);
                out.raises = b.raises;
                out.raises.erase(fail_label);
                if (b.can_succeed()) out.raises.insert(fail_label);
                return out;
            } else {
                static_assert(std::is_same_v<T, expr::Throw>);
                return {false, false, {x.label}};
            }
        },
        e.node);
}

/// Least fixpoint of the outcome analysis over all rules.
inline OutcomeTable outcome_table(const Grammar& g) {
    OutcomeTable table;
    for (const auto& r : g.rules()) table[r.name] = {};
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : g.rules()) {
            Outcomes o = analyze(*r.body, table);
            if (!(o == table[r.name])) {
                table[r.name] = std::move(o);
                changed = true;
            }
        }
    }
    return table;
}

// Non-terminals that may be invoked at the position where `e` starts.
inline void left_calls(const Expression& e, const OutcomeTable& table, std::set<std::string>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::NonTerminal>) {
                out.insert(x.name);
            } else if constexpr (std::is_same_v<T, expr::Sequence>) {
                left_calls(*x.left, table, out);
                if (analyze(*x.left, table).empty) left_calls(*x.right, table, out);
            } else if constexpr (std::is_same_v<T, expr::Choice>) {
                left_calls(*x.left, table, out);
                // The right side starts where the choice started, but only
                // after the left side raised a caught label.
                Outcomes l = analyze(*x.left, table);
                bool caught = false;
                for (const auto& lab : x.catches) caught = caught || l.can_raise(lab);
                if (caught) left_calls(*x.right, table, out);
            } else if constexpr (std::is_same_v<T, expr::Star> || std::is_same_v<T, expr::Not>) {
                left_calls(*x.body, table, out);
            }
        },
        e.node);
}

}  // namespace detail

/// Outcome analysis of `e` in the context of `g`.
inline Outcomes outcomes(const Expression& e, const Grammar& g) {
    return detail::analyze(e, detail::outcome_table(g));
}

/// True if `e` can succeed without consuming input on some input.
inline bool nullable(const Expression& e, const Grammar& g) { return outcomes(e, g).empty; }

inline std::vector<ValidationIssue> validate(const Grammar& g) {
    std::vector<ValidationIssue> issues;
    if (g.rules().empty()) {
        issues.push_back({IssueKind::empty_grammar, "", "grammar has no rules"});
        return issues;
    }
    if (!g.has_rule(g.start()))
        issues.push_back({IssueKind::unknown_nonterminal, g.start(), "start rule '" + g.start() + "' is not defined"});

    for (const auto& r : g.rules()) {
        std::set<std::string> reported;
        for_each_node(*r.body, [&](const Expression& e) {
            if (const auto* nt = e.as<expr::NonTerminal>()) {
                if (!g.has_rule(nt->name) && reported.insert("rule:" + nt->name).second)
                    issues.push_back({IssueKind::unknown_nonterminal, r.name, "reference to undefined rule '" + nt->name + "'"});
            } else if (const auto* t = e.as<expr::Throw>()) {
                if (!g.has_label(t->label) && reported.insert("label:" + t->label.name).second)
                    issues.push_back({IssueKind::undeclared_label, r.name, "throw of undeclared label '" + t->label.name + "'"});
            } else if (const auto* c = e.as<expr::Choice>()) {
                for (const auto& l : c->catches)
                    if (!g.has_label(l) && reported.insert("label:" + l.name).second)
                        issues.push_back({IssueKind::undeclared_label, r.name, "choice catches undeclared label '" + l.name + "'"});
            }
        });
    }

    auto table = detail::outcome_table(g);
    for (const auto& r : g.rules()) {
        for_each_node(*r.body, [&](const Expression& e) {
            if (const auto* s = e.as<expr::Star>(); s && detail::analyze(*s->body, table).empty)
                issues.push_back({IssueKind::nullable_star_body, r.name, "repetition body can succeed without consuming input"});
        });
    }

    std::map<std::string, std::set<std::string>> calls;
    for (const auto& r : g.rules()) detail::left_calls(*r.body, table, calls[r.name]);
    for (const auto& r : g.rules()) {
        // Rule r is left-recursive if it can reach itself through left calls.
        std::set<std::string> seen;
        std::vector<std::string> stack(calls[r.name].begin(), calls[r.name].end());
        bool cyclic = false;
        while (!stack.empty() && !cyclic) {
            std::string n = std::move(stack.back());
            stack.pop_back();
            if (n == r.name) cyclic = true;
            else if (seen.insert(n).second && calls.count(n))
                stack.insert(stack.end(), calls[n].begin(), calls[n].end());
        }
        if (cyclic)
            issues.push_back({IssueKind::left_recursion, r.name, "rule can invoke itself without consuming input"});
    }
    return issues;
}

}  // namespace labelpeg

#pragma once

// Grammar rewrites that encode parser-combinator error handling with labels:
// repetition as recursion, nofail, try, and the four-values translation in
// which `epsn`, `fail` and `error` stand for "succeeded empty", "failed
// without consuming" and "failed after consuming".

#include <set>
#include <stdexcept>
#include <string>

#include "labelpeg/engine.hpp"
#include "labelpeg/grammar.hpp"

namespace labelpeg {

inline const Label epsn_label{"epsn"};
inline const Label error_label{"error"};

class TransformError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// nofail p = p / ^error
inline ExprPtr expand_nofail(ExprPtr p) { return choice(std::move(p), throw_(error_label)); }

/// try p = p /{error} ^fail
inline ExprPtr expand_try(ExprPtr p) { return choice(std::move(p), throw_(fail_label), LabelSet{error_label}); }

inline bool is_try(const expr::Choice& c) {
    const auto* t = c.right->as<expr::Throw>();
    return t && t->label == fail_label && c.catches == LabelSet{error_label};
}

inline bool is_nofail(const expr::Choice& c) {
    const auto* t = c.right->as<expr::Throw>();
    return t && t->label == error_label && c.catches == LabelSet{fail_label};
}

namespace detail {

class StarRewriter {
public:
    explicit StarRewriter(const Grammar& g) : in_(g) {
        for (const auto& r : g.rules()) taken_.insert(r.name);
    }

    Grammar run() {
        Grammar out;
        for (const auto& l : in_.labels()) out.declare_label(l, in_.message(l));
        for (const auto& r : in_.rules()) {
            owner_ = r.name;
            out.add_rule(r.name, rewrite(r.body), r.lexical);
        }
        for (auto& [name, body] : fresh_) out.add_rule(name, body);
        out.set_start(in_.start());
        return out;
    }

private:
    ExprPtr rewrite(const ExprPtr& e) {
        return std::visit(
            [&](const auto& x) -> ExprPtr {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, expr::Sequence>) {
                    return seq(rewrite(x.left), rewrite(x.right));
                } else if constexpr (std::is_same_v<T, expr::Choice>) {
                    return choice(rewrite(x.left), rewrite(x.right), x.catches);
                } else if constexpr (std::is_same_v<T, expr::Not>) {
                    return not_(rewrite(x.body));
                } else if constexpr (std::is_same_v<T, expr::Star>) {
                    ExprPtr body = rewrite(x.body);
                    std::string name = fresh_name();
                    // A <- p A / e
                    fresh_.emplace_back(name, choice(seq(body, nonterminal(name)), empty()));
                    return nonterminal(name);
                } else {
                    return e;
                }
            },
            e->node);
    }

    std::string fresh_name() {
        for (;;) {
            std::string n = owner_ + "_star" + std::to_string(++counter_);
            if (taken_.insert(n).second) return n;
        }
    }

    const Grammar& in_;
    std::set<std::string> taken_;
    std::vector<std::pair<std::string, ExprPtr>> fresh_;
    std::string owner_;
    int counter_ = 0;
};

// Rules that act as tokens: lexical rules and everything reachable from them.
inline std::set<std::string> token_rules(const Grammar& g) {
    std::set<std::string> out;
    std::vector<std::string> work;
    for (const auto& r : g.rules())
        if (r.lexical) work.push_back(r.name);
    while (!work.empty()) {
        std::string n = std::move(work.back());
        work.pop_back();
        if (!out.insert(n).second) continue;
        if (const Rule* r = g.find(n))
            for_each_node(*r->body, [&](const Expression& e) {
                if (const auto* nt = e.as<expr::NonTerminal>()) work.push_back(nt->name);
            });
    }
    return out;
}

inline ExprPtr translate(const ExprPtr& e, const std::string& rule) {
    return std::visit(
        [&](const auto& x) -> ExprPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, expr::Empty>) {
                return throw_(epsn_label);
            } else if constexpr (std::is_same_v<T, expr::Literal>) {
                // Symbol by symbol, so a partial match counts as consumed input.
                ExprPtr chain = terminal(static_cast<unsigned char>(x.text[0]));
                for (std::size_t i = 1; i < x.text.size(); ++i)
                    chain = seq(chain, terminal(static_cast<unsigned char>(x.text[i])));
                return x.text.size() == 1 ? chain : translate(chain, rule);
            } else if constexpr (std::is_same_v<T, expr::Sequence>) {
                ExprPtr p1 = translate(x.left, rule);
                ExprPtr p2 = translate(x.right, rule);
                ExprPtr rest = choice(choice(p2, throw_(error_label)), empty(), LabelSet{epsn_label});
                return choice(seq(p1, rest), p2, LabelSet{epsn_label});
            } else if constexpr (std::is_same_v<T, expr::Choice>) {
                if (is_try(x)) return expand_try(translate(x.left, rule));
                if (is_nofail(x)) return expand_nofail(translate(x.left, rule));
                if (x.catches != LabelSet{fail_label})
                    throw TransformError("rule '" + rule + "': four-values translation accepts only plain choices");
                ExprPtr p1 = translate(x.left, rule);
                ExprPtr p2 = translate(x.right, rule);
                return choice(choice(p1, choice(p2, throw_(epsn_label)), LabelSet{epsn_label}), p2);
            } else if constexpr (std::is_same_v<T, expr::Star>) {
                throw TransformError("rule '" + rule + "': desugar repetitions before the four-values translation");
            } else if constexpr (std::is_same_v<T, expr::Not>) {
                throw TransformError("rule '" + rule + "': predicates have no four-values translation");
            } else if constexpr (std::is_same_v<T, expr::Throw>) {
                throw TransformError("rule '" + rule + "': throw has no four-values translation");
            } else {
                return e;
            }
        },
        e->node);
}

}  // namespace detail

/// Replaces every repetition p* with a fresh rule A <- p A / e.
inline Grammar desugar_star(const Grammar& g) { return detail::StarRewriter(g).run(); }

/// Four-values translation of every non-token rule. Lexical rules and the
/// rules they use are kept as they are and behave as single tokens.
inline Grammar four_values(const Grammar& g) {
    if (g.has_label(epsn_label)) throw TransformError("label 'epsn' is reserved for the four-values translation");
    auto tokens = detail::token_rules(g);
    Grammar out;
    for (const auto& l : g.labels()) out.declare_label(l, g.message(l));
    out.declare_label(epsn_label);
    out.declare_label(error_label);
    for (const auto& r : g.rules()) {
        if (tokens.count(r.name)) out.add_rule(r.name, r.body, r.lexical);
        else out.add_rule(r.name, detail::translate(r.body, r.name), r.lexical);
    }
    out.set_start(g.start());
    return out;
}

/// Translation of a single expression (no rules involved).
inline ExprPtr four_values(const ExprPtr& e) { return detail::translate(e, "<expression>"); }

class FourValue {
public:
    enum class Kind { ok, epsn, fail, error };

    static FourValue ok(Position end) { return FourValue(Kind::ok, end); }
    static FourValue epsn() { return FourValue(Kind::epsn, 0); }
    static FourValue fail() { return FourValue(Kind::fail, 0); }
    static FourValue error() { return FourValue(Kind::error, 0); }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    /// End of the consumed prefix; meaningful for ok only.
    [[nodiscard]] Position end() const noexcept { return end_; }

    friend bool operator==(const FourValue&, const FourValue&) = default;

private:
    FourValue(Kind k, Position e) : kind_(k), end_(e) {}
    Kind kind_;
    Position end_;
};

inline std::string to_string(const FourValue& v) {
    switch (v.kind()) {
        case FourValue::Kind::ok: return "OK(" + std::to_string(v.end()) + ")";
        case FourValue::Kind::epsn: return "Epsn";
        case FourValue::Kind::fail: return "Fail";
        case FourValue::Kind::error: return "Error";
    }
    return "?";
}

/// Reads a labeled result of a four-values translated grammar.
inline FourValue classify_outcome(const LabeledResult& r, Position start) {
    if (r.ok()) {
        if (r.end() <= start) throw std::logic_error("translated expression succeeded without consuming input");
        return FourValue::ok(r.end());
    }
    if (r.label() == epsn_label) return FourValue::epsn();
    if (r.label() == fail_label) return FourValue::fail();
    if (r.label() == error_label) return FourValue::error();
    throw std::logic_error("label '" + r.label().name + "' is not a four-values outcome");
}

}  // namespace labelpeg

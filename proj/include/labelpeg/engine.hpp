#pragma once

// The four matching semantics, each a structural recursion over Expression:
//
//   match_plain    - ordinary PEG: consume a prefix or fail
//   match_fft      - plus the farthest failure position
//   match_ffl      - plus the list of expressions expected at that position
//   match_labeled  - labeled failures with throw and catching choice; a
//                    farthest-failure record is kept alongside
//
// All matchers are pure functions of their arguments. Failure information
// travels in return values; nothing is stored between calls.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "labelpeg/failure.hpp"
#include "labelpeg/grammar.hpp"
#include "labelpeg/print.hpp"

namespace labelpeg {

/// Raised when a matcher exceeds its budget or is used outside its domain.
class EngineError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Budget {
    std::uint64_t steps = 10'000'000;
    std::size_t depth = 20'000;
};

/// Whether a non-lexical rule replaces its body's expected list with its own
/// name when the failure is at the rule's start, or passes the list through.
enum class VarStrategy { join, propagate };

class PlainResult {
public:
    static PlainResult consumed(Position end) { return PlainResult(end); }
    static PlainResult failed() { return PlainResult(); }

    [[nodiscard]] bool ok() const noexcept { return end_.has_value(); }
    [[nodiscard]] Position end() const { return end_.value(); }

    friend bool operator==(const PlainResult&, const PlainResult&) = default;

private:
    PlainResult() = default;
    explicit PlainResult(Position e) : end_(e) {}
    std::optional<Position> end_;
};

class LabeledResult {
public:
    struct Consumed {
        Position end;
        friend bool operator==(const Consumed&, const Consumed&) = default;
    };
    struct Raised {
        Label label;
        Position at;
        friend bool operator==(const Raised&, const Raised&) = default;
    };

    static LabeledResult consumed(Position end) { return LabeledResult(Consumed{end}); }
    static LabeledResult raised(Label l, Position at) { return LabeledResult(Raised{std::move(l), at}); }

    [[nodiscard]] bool ok() const noexcept { return std::holds_alternative<Consumed>(v_); }
    [[nodiscard]] Position end() const { return std::get<Consumed>(v_).end; }
    [[nodiscard]] const Label& label() const { return std::get<Raised>(v_).label; }
    [[nodiscard]] Position at() const { return std::get<Raised>(v_).at; }
    [[nodiscard]] bool raised_fail() const { return !ok() && label() == fail_label; }

    friend bool operator==(const LabeledResult&, const LabeledResult&) = default;

private:
    explicit LabeledResult(std::variant<Consumed, Raised> v) : v_(std::move(v)) {}
    std::variant<Consumed, Raised> v_;
};

struct FftResult {
    PlainResult result;
    std::optional<Position> farthest;
};

struct FflResult {
    PlainResult result;
    FailureRecord record;
};

struct LabeledMatch {
    LabeledResult result;
    FailureRecord record;
};

namespace detail {

class Meter {
public:
    explicit Meter(Budget b) : budget_(b) {}

    class Frame {
    public:
        explicit Frame(Meter& m) : m_(m) {
            if (++m_.steps_ > m_.budget_.steps) throw EngineError("step budget exceeded");
            if (++m_.depth_ > m_.budget_.depth) throw EngineError("recursion depth budget exceeded");
        }
        ~Frame() { --m_.depth_; }
        Frame(const Frame&) = delete;
        Frame& operator=(const Frame&) = delete;

    private:
        Meter& m_;
    };

private:
    Budget budget_;
    std::uint64_t steps_ = 0;
    std::size_t depth_ = 0;
};

inline void check_start(std::string_view input, Position start) {
    if (start > input.size()) throw std::out_of_range("match start beyond end of input");
}

inline void require_throw_free(const Grammar& g, const char* who) {
    if (g.uses_throw()) throw EngineError(std::string(who) + " does not accept grammars with throw; use labeled matching");
}

// Plain PEG semantics.
class PlainMatcher {
public:
    PlainMatcher(const Grammar& g, std::string_view in, Budget b) : g_(g), in_(in), meter_(b) {}

    PlainResult eval(const Expression& e, Position pos) {
        Meter::Frame frame(meter_);
        return std::visit([&](const auto& x) { return step(x, pos); }, e.node);
    }

private:
    PlainResult step(const expr::Empty&, Position pos) { return PlainResult::consumed(pos); }

    PlainResult step(const expr::Terminal& t, Position pos) {
        if (pos < in_.size() && static_cast<unsigned char>(in_[pos]) == t.ch) return PlainResult::consumed(pos + 1);
        return PlainResult::failed();
    }

    PlainResult step(const expr::Any&, Position pos) {
        return pos < in_.size() ? PlainResult::consumed(pos + 1) : PlainResult::failed();
    }

    PlainResult step(const expr::Literal& l, Position pos) {
        if (in_.substr(pos).starts_with(l.text)) return PlainResult::consumed(pos + l.text.size());
        return PlainResult::failed();
    }

    PlainResult step(const expr::Class& c, Position pos) {
        if (pos < in_.size() && c.members.test(static_cast<unsigned char>(in_[pos])))
            return PlainResult::consumed(pos + 1);
        return PlainResult::failed();
    }

    PlainResult step(const expr::NonTerminal& n, Position pos) { return eval(g_.body(n.name), pos); }

    PlainResult step(const expr::Sequence& s, Position pos) {
        PlainResult r1 = eval(*s.left, pos);
        if (!r1.ok()) return r1;
        return eval(*s.right, r1.end());
    }

    PlainResult step(const expr::Choice& c, Position pos) {
        PlainResult r1 = eval(*c.left, pos);
        if (r1.ok()) return r1;
        return eval(*c.right, pos);
    }

    PlainResult step(const expr::Star& s, Position pos) {
        for (;;) {
            PlainResult r = eval(*s.body, pos);
            if (!r.ok()) return PlainResult::consumed(pos);
            pos = r.end();
        }
    }

    PlainResult step(const expr::Not& n, Position pos) {
        return eval(*n.body, pos).ok() ? PlainResult::failed() : PlainResult::consumed(pos);
    }

    PlainResult step(const expr::Throw&, Position) { throw EngineError("throw reached in plain matching"); }

    const Grammar& g_;
    std::string_view in_;
    Meter meter_;
};

// Failure tracking policies for TrackingMatcher.

/// Farthest failure position only.
struct PositionTracker {
    using Record = std::optional<Position>;

    static Record none() { return std::nullopt; }
    template <class MakeItem>
    static Record fail_at(Position pos, MakeItem&&) {
        return pos;
    }
    static Record merge(const Record& a, const Record& b) { return smallest(a, b); }
    static Record rule(const Grammar&, const Record& r, Position, const std::string&, bool) { return r; }
    static bool failed_at_all(const Record& r) { return r.has_value(); }
};

/// Farthest failure position and expected list.
struct ListTracker {
    using Record = FailureRecord;

    VarStrategy strategy = VarStrategy::join;

    static Record none() { return {}; }
    template <class MakeItem>
    static Record fail_at(Position pos, MakeItem&& make) {
        return FailureRecord(pos, make());
    }
    static Record merge(const Record& a, const Record& b) { return join(a, b); }

    Record rule(const Grammar& g, const Record& r, Position start, const std::string& name, bool ok) const {
        if (g.is_lexical(name)) {
            if (ok) return {};
            return FailureRecord(start, NonTerminalItem{name, g.token_display(name)});
        }
        if (strategy == VarStrategy::join) return join_var(r, start, name);
        return r;
    }
};

template <class Tracker>
class TrackingMatcher {
public:
    using Record = typename Tracker::Record;
    struct Outcome {
        PlainResult result;
        Record record;
    };

    TrackingMatcher(const Grammar& g, std::string_view in, Budget b, Tracker t = {})
        : g_(g), in_(in), meter_(b), tracker_(t) {}

    Outcome eval(const Expression& e, Position pos) {
        Meter::Frame frame(meter_);
        return std::visit([&](const auto& x) { return step(x, pos); }, e.node);
    }

private:
    Outcome ok(Position end) { return {PlainResult::consumed(end), Tracker::none()}; }

    template <class MakeItem>
    Outcome fail(Position at, MakeItem&& make) {
        return {PlainResult::failed(), Tracker::fail_at(at, std::forward<MakeItem>(make))};
    }

    Outcome step(const expr::Empty&, Position pos) { return ok(pos); }

    Outcome step(const expr::Terminal& t, Position pos) {
        if (pos < in_.size() && static_cast<unsigned char>(in_[pos]) == t.ch) return ok(pos + 1);
        return fail(pos, [&] { return ExpectedItem{TerminalItem{t.ch}}; });
    }

    Outcome step(const expr::Any&, Position pos) {
        if (pos < in_.size()) return ok(pos + 1);
        return fail(pos, [] { return ExpectedItem{ClassItem{"any character"}}; });
    }

    Outcome step(const expr::Literal& l, Position pos) {
        if (in_.substr(pos).starts_with(l.text)) return ok(pos + l.text.size());
        return fail(pos, [&] { return ExpectedItem{LiteralItem{l.text}}; });
    }

    Outcome step(const expr::Class& c, Position pos) {
        if (pos < in_.size() && c.members.test(static_cast<unsigned char>(in_[pos]))) return ok(pos + 1);
        return fail(pos, [&] { return ExpectedItem{ClassItem{c.name}}; });
    }

    Outcome step(const expr::NonTerminal& n, Position pos) {
        Outcome o = eval(g_.body(n.name), pos);
        o.record = tracker_.rule(g_, o.record, pos, n.name, o.result.ok());
        return o;
    }

    Outcome step(const expr::Sequence& s, Position pos) {
        Outcome o1 = eval(*s.left, pos);
        if (!o1.result.ok()) return o1;
        Outcome o2 = eval(*s.right, o1.result.end());
        return {o2.result, Tracker::merge(o1.record, o2.record)};
    }

    Outcome step(const expr::Choice& c, Position pos) {
        Outcome o1 = eval(*c.left, pos);
        if (o1.result.ok()) return o1;
        Outcome o2 = eval(*c.right, pos);
        return {o2.result, Tracker::merge(o1.record, o2.record)};
    }

    Outcome step(const expr::Star& s, Position pos) {
        Record acc = Tracker::none();
        for (;;) {
            Outcome o = eval(*s.body, pos);
            acc = Tracker::merge(acc, o.record);
            if (!o.result.ok()) return {PlainResult::consumed(pos), acc};
            pos = o.result.end();
        }
    }

    Outcome step(const expr::Not& n, Position pos) {
        Outcome o = eval(*n.body, pos);
        if (!o.result.ok()) return ok(pos);
        return fail(pos, [&] { return ExpectedItem{PredicateItem{"!" + detail::print(*n.body, prec_prefix)}}; });
    }

    Outcome step(const expr::Throw&, Position) { throw EngineError("throw reached in failure-tracking matching"); }

    const Grammar& g_;
    std::string_view in_;
    Meter meter_;
    Tracker tracker_;
};

// Labeled semantics with a parallel expected-list record.
class LabeledMatcher {
public:
    LabeledMatcher(const Grammar& g, std::string_view in, Budget b, VarStrategy s)
        : g_(g), in_(in), meter_(b), tracker_{s} {}

    LabeledMatch eval(const Expression& e, Position pos) {
        Meter::Frame frame(meter_);
        return std::visit([&](const auto& x) { return step(x, pos); }, e.node);
    }

private:
    static LabeledMatch ok(Position end) { return {LabeledResult::consumed(end), {}}; }
    static LabeledMatch fail(Position at, ExpectedItem item) {
        return {LabeledResult::raised(fail_label, at), FailureRecord(at, std::move(item))};
    }

    LabeledMatch step(const expr::Empty&, Position pos) { return ok(pos); }

    LabeledMatch step(const expr::Terminal& t, Position pos) {
        if (pos < in_.size() && static_cast<unsigned char>(in_[pos]) == t.ch) return ok(pos + 1);
        return fail(pos, TerminalItem{t.ch});
    }

    LabeledMatch step(const expr::Any&, Position pos) {
        if (pos < in_.size()) return ok(pos + 1);
        return fail(pos, ClassItem{"any character"});
    }

    LabeledMatch step(const expr::Literal& l, Position pos) {
        if (in_.substr(pos).starts_with(l.text)) return ok(pos + l.text.size());
        return fail(pos, LiteralItem{l.text});
    }

    LabeledMatch step(const expr::Class& c, Position pos) {
        if (pos < in_.size() && c.members.test(static_cast<unsigned char>(in_[pos]))) return ok(pos + 1);
        return fail(pos, ClassItem{c.name});
    }

    LabeledMatch step(const expr::NonTerminal& n, Position pos) {
        LabeledMatch m = eval(g_.body(n.name), pos);
        m.record = tracker_.rule(g_, m.record, pos, n.name, m.result.ok());
        return m;
    }

    LabeledMatch step(const expr::Sequence& s, Position pos) {
        LabeledMatch m1 = eval(*s.left, pos);
        if (!m1.result.ok()) return m1;
        LabeledMatch m2 = eval(*s.right, m1.result.end());
        return {m2.result, join(m1.record, m2.record)};
    }

    LabeledMatch step(const expr::Choice& c, Position pos) {
        LabeledMatch m1 = eval(*c.left, pos);
        if (m1.result.ok() || !c.catches.count(m1.result.label())) return m1;
        LabeledMatch m2 = eval(*c.right, pos);
        return {m2.result, join(m1.record, m2.record)};
    }

    LabeledMatch step(const expr::Star& s, Position pos) {
        FailureRecord acc;
        for (;;) {
            LabeledMatch m = eval(*s.body, pos);
            acc = join(acc, m.record);
            if (m.result.ok()) {
                pos = m.result.end();
                continue;
            }
            if (m.result.label() == fail_label) return {LabeledResult::consumed(pos), acc};
            return {m.result, acc};
        }
    }

    LabeledMatch step(const expr::Not& n, Position pos) {
        LabeledMatch m = eval(*n.body, pos);
        if (m.result.ok())
            return fail(pos, PredicateItem{"!" + detail::print(*n.body, prec_prefix)});
        if (m.result.label() == fail_label) return ok(pos);
        return m;
    }

    LabeledMatch step(const expr::Throw& t, Position pos) { return {LabeledResult::raised(t.label, pos), {}}; }

    const Grammar& g_;
    std::string_view in_;
    Meter meter_;
    ListTracker tracker_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Public entry points. Each matches the grammar's start rule against `input`
// beginning at `start`; the *_expr variants match an arbitrary expression in
// the context of the grammar's rules.

inline PlainResult match_plain_expr(const Grammar& g, const Expression& e, std::string_view input,
                                    Position start = 0, Budget b = {}) {
    detail::check_start(input, start);
    detail::require_throw_free(g, "plain matching");
    return detail::PlainMatcher(g, input, b).eval(e, start);
}

inline PlainResult match_plain(const Grammar& g, std::string_view input, Position start = 0, Budget b = {}) {
    return match_plain_expr(g, g.body(g.start()), input, start, b);
}

inline FftResult match_fft_expr(const Grammar& g, const Expression& e, std::string_view input,
                                Position start = 0, Budget b = {}) {
    detail::check_start(input, start);
    detail::require_throw_free(g, "farthest-failure matching");
    auto o = detail::TrackingMatcher<detail::PositionTracker>(g, input, b).eval(e, start);
    return {o.result, o.record};
}

inline FftResult match_fft(const Grammar& g, std::string_view input, Position start = 0, Budget b = {}) {
    return match_fft_expr(g, g.body(g.start()), input, start, b);
}

inline FflResult match_ffl_expr(const Grammar& g, const Expression& e, std::string_view input,
                                Position start = 0, VarStrategy s = VarStrategy::join, Budget b = {}) {
    detail::check_start(input, start);
    detail::require_throw_free(g, "expected-list matching");
    auto o = detail::TrackingMatcher<detail::ListTracker>(g, input, b, detail::ListTracker{s}).eval(e, start);
    return {o.result, std::move(o.record)};
}

inline FflResult match_ffl(const Grammar& g, std::string_view input, Position start = 0,
                           VarStrategy s = VarStrategy::join, Budget b = {}) {
    return match_ffl_expr(g, g.body(g.start()), input, start, s, b);
}

inline LabeledMatch match_labeled_expr(const Grammar& g, const Expression& e, std::string_view input,
                                       Position start = 0, VarStrategy s = VarStrategy::join, Budget b = {}) {
    detail::check_start(input, start);
    return detail::LabeledMatcher(g, input, b, s).eval(e, start);
}

inline LabeledMatch match_labeled(const Grammar& g, std::string_view input, Position start = 0,
                                  VarStrategy s = VarStrategy::join, Budget b = {}) {
    return match_labeled_expr(g, g.body(g.start()), input, start, s, b);
}

}  // namespace labelpeg

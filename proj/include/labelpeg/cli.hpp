#pragma once

// Driver behind the labelpeg command: load a grammar, match one input file,
// print at most one diagnostic.
//
// Exit status: 0 the input matched, 1 syntax error in the input, 2 problem
// with the grammar, the files or the options.

#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "labelpeg/diagnostics.hpp"
#include "labelpeg/engine.hpp"
#include "labelpeg/grammar_text.hpp"
#include "labelpeg/transforms.hpp"
#include "labelpeg/validate.hpp"

namespace labelpeg {

enum class Mode { plain, farthest, expected, labeled };
enum class Transform { none, four_values };

struct RunConfig {
    std::string grammar_path;
    std::string input_path;
    Mode mode = Mode::expected;
    std::optional<std::string> start_rule;
    bool require_eof = true;
    VarStrategy var_strategy = VarStrategy::join;
    Transform transform = Transform::none;
    bool validate_only = false;
    std::uint64_t steps = Budget{}.steps;
    /// Name used in diagnostics; the input path when empty.
    std::string source_name;
};

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "plain") return Mode::plain;
    if (s == "farthest") return Mode::farthest;
    if (s == "expected") return Mode::expected;
    if (s == "labeled") return Mode::labeled;
    return std::nullopt;
}

inline std::optional<VarStrategy> parse_var_strategy(std::string_view s) {
    if (s == "join") return VarStrategy::join;
    if (s == "propagate") return VarStrategy::propagate;
    return std::nullopt;
}

inline std::optional<Transform> parse_transform(std::string_view s) {
    if (s == "none") return Transform::none;
    if (s == "four-values") return Transform::four_values;
    return std::nullopt;
}

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Diagnostic for one match, or nothing when the input is accepted.
inline std::optional<Diagnostic> diagnose(const Grammar& g, const RunConfig& cfg, std::string_view input,
                                          std::string_view source) {
    Budget budget;
    budget.steps = cfg.steps;
    auto leftover = [&](Position end) { return cfg.require_eof && end < input.size(); };
    // Past-the-end suffix: blame the record when it reaches at least that far.
    auto suffix = [&](Position end, const FailureRecord& r) {
        if (r.at() && *r.at() >= end) return render_ffl(source, input, r);
        return render_position(source, input, end);
    };

    if (cfg.transform == Transform::four_values) {
        auto m = match_labeled(g, input, 0, cfg.var_strategy, budget);
        if (m.result.ok()) {
            if (!leftover(m.result.end())) return std::nullopt;
            return render_position(source, input, m.result.end());
        }
        FourValue v = classify_outcome(m.result, 0);
        if (v.kind() == FourValue::Kind::epsn) {
            if (!leftover(0)) return std::nullopt;
            return render_position(source, input, 0);
        }
        Diagnostic d = render_position(source, input, m.result.at());
        d.label = m.result.label();
        return d;
    }

    switch (cfg.mode) {
        case Mode::plain: {
            auto r = match_plain(g, input, 0, budget);
            if (!r.ok()) return render_position(source, input, 0);
            if (leftover(r.end())) return render_position(source, input, r.end());
            return std::nullopt;
        }
        case Mode::farthest: {
            auto r = match_fft(g, input, 0, budget);
            if (!r.result.ok()) return render_position(source, input, r.farthest.value_or(0));
            Position end = r.result.end();
            if (!leftover(end)) return std::nullopt;
            return render_position(source, input, r.farthest && *r.farthest >= end ? *r.farthest : end);
        }
        case Mode::expected: {
            auto r = match_ffl(g, input, 0, cfg.var_strategy, budget);
            if (!r.result.ok()) return suffix(0, r.record);
            if (!leftover(r.result.end())) return std::nullopt;
            return suffix(r.result.end(), r.record);
        }
        case Mode::labeled: {
            auto m = match_labeled(g, input, 0, cfg.var_strategy, budget);
            if (!m.result.ok()) return render_label(g, m.result.label(), m.result.at(), input, source, m.record);
            if (!leftover(m.result.end())) return std::nullopt;
            return suffix(m.result.end(), m.record);
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    (void)out;  // success is silent
    auto text = detail::read_file(cfg.grammar_path);
    if (!text) {
        err << "labelpeg: cannot read grammar file '" << cfg.grammar_path << "'\n";
        return 2;
    }
    auto parsed = parse_grammar(*text);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << format_error(cfg.grammar_path, *text, e) << "\n";
        return 2;
    }
    Grammar g = std::move(*parsed.grammar);
    if (cfg.start_rule) {
        if (!g.has_rule(*cfg.start_rule)) {
            err << "labelpeg: no rule named '" << *cfg.start_rule << "'\n";
            return 2;
        }
        g.set_start(*cfg.start_rule);
    }
    auto report = [&](const std::vector<ValidationIssue>& issues) {
        for (const auto& i : issues)
            err << cfg.grammar_path << ": " << to_string(i.kind) << " in rule '" << i.rule << "': " << i.detail << "\n";
        return issues.empty();
    };
    if (!report(validate(g))) return 2;

    if (cfg.transform == Transform::four_values) {
        if (cfg.mode != Mode::labeled) {
            err << "labelpeg: --transform four-values needs --mode labeled\n";
            return 2;
        }
        try {
            g = four_values(desugar_star(g));
        } catch (const TransformError& e) {
            err << cfg.grammar_path << ": " << e.what() << "\n";
            return 2;
        }
        if (!report(validate(g))) return 2;
    }
    if (cfg.mode != Mode::labeled && g.uses_throw()) {
        err << "labelpeg: the grammar throws labels; use --mode labeled\n";
        return 2;
    }
    if (cfg.validate_only) return 0;

    auto input = detail::read_file(cfg.input_path);
    if (!input) {
        err << "labelpeg: cannot read input file '" << cfg.input_path << "'\n";
        return 2;
    }
    std::string source = cfg.source_name.empty() ? cfg.input_path : cfg.source_name;
    try {
        auto d = detail::diagnose(g, cfg, *input, source);
        if (!d) return 0;
        err << d->message << "\n";
        return 1;
    } catch (const EngineError& e) {
        err << "labelpeg: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "labelpeg: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace labelpeg

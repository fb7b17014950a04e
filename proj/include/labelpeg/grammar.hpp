#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "labelpeg/expression.hpp"

namespace labelpeg {

struct Rule {
    std::string name;
    ExprPtr body;
    bool lexical = false;

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.name == b.name && a.lexical == b.lexical && same(a.body, b.body);
    }
};

/// A labeled PEG: rules in declaration order, a start rule, the label set
/// (always containing `fail`) and an optional message per label.
///
/// Grammars are plain values. Once built they are only read, so a single
/// instance can be matched from many threads at once.
class Grammar {
public:
    Grammar() { labels_.insert(fail_label); }

    /// Adds or replaces a rule. The first rule added becomes the start rule
    /// unless set_start() says otherwise.
    Grammar& add_rule(std::string name, ExprPtr body, bool lexical = false) {
        if (auto it = index_.find(name); it != index_.end()) {
            rules_[it->second] = Rule{std::move(name), std::move(body), lexical};
            return *this;
        }
        if (start_.empty()) start_ = name;
        index_.emplace(name, rules_.size());
        rules_.push_back(Rule{std::move(name), std::move(body), lexical});
        return *this;
    }

    Grammar& set_start(std::string name) {
        start_ = std::move(name);
        return *this;
    }

    Grammar& set_lexical(const std::string& name, bool lexical = true) {
        if (auto it = index_.find(name); it != index_.end()) rules_[it->second].lexical = lexical;
        return *this;
    }

    Grammar& declare_label(Label l, std::optional<std::string> message = std::nullopt) {
        if (message && l == fail_label) throw std::invalid_argument("the fail label cannot carry a message");
        labels_.insert(l);
        if (message) messages_[l.name] = std::move(*message);
        return *this;
    }
    Grammar& declare_label(std::string l, std::optional<std::string> message = std::nullopt) {
        return declare_label(Label{std::move(l)}, std::move(message));
    }

    [[nodiscard]] const std::vector<Rule>& rules() const noexcept { return rules_; }
    [[nodiscard]] const std::string& start() const noexcept { return start_; }
    [[nodiscard]] const LabelSet& labels() const noexcept { return labels_; }
    [[nodiscard]] const std::map<std::string, std::string>& messages() const noexcept { return messages_; }

    [[nodiscard]] bool has_rule(const std::string& name) const { return index_.count(name) != 0; }

    [[nodiscard]] const Rule* find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? nullptr : &rules_[it->second];
    }

    /// Body of a rule known to exist.
    [[nodiscard]] const Expression& body(const std::string& name) const {
        const Rule* r = find(name);
        if (!r) throw std::out_of_range("unknown rule '" + name + "'");
        return *r->body;
    }

    [[nodiscard]] bool is_lexical(const std::string& name) const {
        const Rule* r = find(name);
        return r && r->lexical;
    }

    [[nodiscard]] bool has_label(const Label& l) const { return labels_.count(l) != 0; }

    [[nodiscard]] std::optional<std::string> message(const Label& l) const {
        auto it = messages_.find(l.name);
        if (it == messages_.end()) return std::nullopt;
        return it->second;
    }

    /// How a lexical rule is shown in expected lists: the text of the
    /// leading terminal or literal of its body, if any. Empty otherwise.
    [[nodiscard]] std::string token_display(const std::string& name) const {
        const Rule* r = find(name);
        if (!r || !r->lexical) return {};
        const Expression* e = r->body.get();
        while (const auto* s = e->as<expr::Sequence>()) e = s->left.get();
        if (const auto* t = e->as<expr::Terminal>()) return std::string(1, static_cast<char>(t->ch));
        if (const auto* l = e->as<expr::Literal>()) return l->text;
        return {};
    }

    /// True if any rule contains a throw.
    [[nodiscard]] bool uses_throw() const {
        bool found = false;
        for (const auto& r : rules_)
            for_each_node(*r.body, [&](const Expression& e) { found = found || e.is<expr::Throw>(); });
        return found;
    }

    friend bool operator==(const Grammar& a, const Grammar& b) {
        return a.rules_ == b.rules_ && a.start_ == b.start_ && a.labels_ == b.labels_ &&
               a.messages_ == b.messages_;
    }

private:
    std::vector<Rule> rules_;
    std::unordered_map<std::string, std::size_t> index_;
    std::string start_;
    LabelSet labels_;
    std::map<std::string, std::string> messages_;
};

}  // namespace labelpeg

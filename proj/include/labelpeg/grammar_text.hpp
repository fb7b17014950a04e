#pragma once

// Reader for the textual grammar format (see grammar-format.md).
//
//   label sc = "there is a missing ';'"
//   Prog <- Skip CmdSeq !.
//   lex SEMICOLON <- ';' Skip
//
// Parsing happens in two steps: text to a SurfaceExpr tree that still holds
// the sugar (&, +, ?, expect, try, nofail), then desugar() to Expression.

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "labelpeg/grammar.hpp"
#include "labelpeg/transforms.hpp"

namespace labelpeg {

struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct SurfaceExpr {
    enum class Kind { atom, sequence, choice, star, not_, and_, plus, optional, expect, try_, nofail };

    Kind kind = Kind::atom;
    ExprPtr atom;                   // atom
    std::vector<SurfaceExpr> args;  // operands, left to right
    LabelSet catches;               // choice
    Label label;                    // expect
    SourceSpan span;
};

/// Expands the sugar; the result uses the core expression forms only.
inline ExprPtr desugar(const SurfaceExpr& s) {
    using K = SurfaceExpr::Kind;
    switch (s.kind) {
        case K::atom: return s.atom;
        case K::sequence: return seq(desugar(s.args.at(0)), desugar(s.args.at(1)));
        case K::choice: return choice(desugar(s.args.at(0)), desugar(s.args.at(1)), s.catches);
        case K::star: return star(desugar(s.args.at(0)));
        case K::not_: return not_(desugar(s.args.at(0)));
        case K::and_: return and_(desugar(s.args.at(0)));
        case K::plus: {
            ExprPtr p = desugar(s.args.at(0));
            return seq(p, star(p));
        }
        case K::optional: return choice(desugar(s.args.at(0)), empty());
        case K::expect: return expect(desugar(s.args.at(0)), s.label);
        case K::try_: return expand_try(desugar(s.args.at(0)));
        case K::nofail: return expand_nofail(desugar(s.args.at(0)));
    }
    return nullptr;
}

/// Surface view of a core expression; desugar(lift(e)) rebuilds e.
inline SurfaceExpr lift(const ExprPtr& e) {
    using K = SurfaceExpr::Kind;
    SurfaceExpr s;
    if (const auto* q = e->as<expr::Sequence>()) {
        s.kind = K::sequence;
        s.args = {lift(q->left), lift(q->right)};
    } else if (const auto* c = e->as<expr::Choice>()) {
        s.kind = K::choice;
        s.args = {lift(c->left), lift(c->right)};
        s.catches = c->catches;
    } else if (const auto* st = e->as<expr::Star>()) {
        s.kind = K::star;
        s.args = {lift(st->body)};
    } else if (const auto* n = e->as<expr::Not>()) {
        s.kind = K::not_;
        s.args = {lift(n->body)};
    } else {
        s.atom = e;
    }
    return s;
}

struct GrammarFileError {
    SourceSpan span;
    std::string message;
};

struct GrammarParse {
    std::optional<Grammar> grammar;
    std::vector<GrammarFileError> errors;

    [[nodiscard]] bool ok() const noexcept { return grammar.has_value(); }
};

namespace detail {

struct Token {
    enum Kind { word, arrow, terminal, literal, klass, dot, slash, lbrace, rbrace, comma, bang, amp, star, plus,
                question, lparen, rparen, caret, equals, end, bad };
    Kind kind;
    SourceSpan span;
    std::string text;  // decoded text of quoted atoms, or the word itself
    std::bitset<256> members;
    bool line_start = false;  // first token on its line
};

class Lexer {
public:
    Lexer(std::string_view src, std::vector<GrammarFileError>& errors) : src_(src), errors_(errors) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        bool line_start = true;
        for (;;) {
            while (pos_ < src_.size()) {
                char c = src_[pos_];
                if (c == '\n') {
                    line_start = true;
                    ++pos_;
                } else if (c == ' ' || c == '\t' || c == '\r') {
                    ++pos_;
                } else if (c == '#') {
                    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                } else {
                    break;
                }
            }
            Token t = next();
            t.line_start = line_start;
            line_start = false;
            out.push_back(std::move(t));
            if (out.back().kind == Token::end) return out;
        }
    }

private:
    static bool word_byte(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    }

    Token make(Token::Kind k, std::size_t start) { return Token{k, {start, pos_}, {}, {}, false}; }

    void error(std::size_t start, std::size_t end, std::string msg) {
        errors_.push_back({{start, end}, std::move(msg)});
    }

    Token next() {
        std::size_t start = pos_;
        if (pos_ >= src_.size()) return make(Token::end, start);
        char c = src_[pos_];
        if (word_byte(c)) {
            while (pos_ < src_.size() && word_byte(src_[pos_])) ++pos_;
            Token t = make(Token::word, start);
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        ++pos_;
        switch (c) {
            case '<':
                if (pos_ < src_.size() && src_[pos_] == '-') {
                    ++pos_;
                    return make(Token::arrow, start);
                }
                break;
            case '\'': return quoted(start, '\'', Token::terminal);
            case '"': return quoted(start, '"', Token::literal);
            case '[': return klass(start);
            case '.': return make(Token::dot, start);
            case '/': return make(Token::slash, start);
            case '{': return make(Token::lbrace, start);
            case '}': return make(Token::rbrace, start);
            case ',': return make(Token::comma, start);
            case '!': return make(Token::bang, start);
            case '&': return make(Token::amp, start);
            case '*': return make(Token::star, start);
            case '+': return make(Token::plus, start);
            case '?': return make(Token::question, start);
            case '(': return make(Token::lparen, start);
            case ')': return make(Token::rparen, start);
            case '^': return make(Token::caret, start);
            case '=': return make(Token::equals, start);
            default: break;
        }
        error(start, pos_, "unexpected character '" + escape_symbols(src_.substr(start, 1)) + "'");
        return make(Token::bad, start);
    }

    static int hex_value(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

    // Reads one possibly escaped symbol; pos_ is on the symbol.
    unsigned char symbol() {
        std::size_t start = pos_;
        char c = src_[pos_++];
        if (c != '\\') return static_cast<unsigned char>(c);
        if (pos_ >= src_.size()) {
            error(start, pos_, "unterminated escape");
            return '\\';
        }
        char e = src_[pos_++];
        switch (e) {
            case 'n': return '\n';
            case 't': return '\t';
            case 'r': return '\r';
            case '\\':
            case '\'':
            case '"':
            case '[':
            case ']':
            case '-':
            case '^': return static_cast<unsigned char>(e);
            case 'x': {
                int hi = pos_ < src_.size() ? hex_value(src_[pos_]) : -1;
                int lo = pos_ + 1 < src_.size() ? hex_value(src_[pos_ + 1]) : -1;
                if (hi < 0 || lo < 0) {
                    error(start, pos_, "\\x needs two hex digits");
                    return 'x';
                }
                pos_ += 2;
                return static_cast<unsigned char>(hi * 16 + lo);
            }
            default:
                error(start, pos_, "unknown escape '\\" + escape_symbols(std::string_view(&e, 1)) + "'");
                return static_cast<unsigned char>(e);
        }
    }

    Token quoted(std::size_t start, char quote, Token::Kind kind) {
        std::string text;
        while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') text += static_cast<char>(symbol());
        if (pos_ >= src_.size() || src_[pos_] != quote) {
            error(start, pos_, "unterminated quoted text");
            return make(Token::bad, start);
        }
        ++pos_;
        Token t = make(kind, start);
        if (kind == Token::terminal && text.size() != 1) {
            error(start, pos_, "a terminal holds exactly one symbol; use \"...\" for longer text");
            t.kind = Token::bad;
        } else if (kind == Token::literal && text.empty()) {
            error(start, pos_, "empty literal; use e for the empty expression");
            t.kind = Token::bad;
        }
        t.text = std::move(text);
        return t;
    }

    Token klass(std::size_t start) {
        std::bitset<256> members;
        bool negate = pos_ < src_.size() && src_[pos_] == '^';
        if (negate) ++pos_;
        while (pos_ < src_.size() && src_[pos_] != ']' && src_[pos_] != '\n') {
            unsigned char lo = symbol();
            unsigned char hi = lo;
            if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] != ']') {
                ++pos_;
                hi = symbol();
                if (hi < lo) error(start, pos_, "reversed range in character class");
            }
            for (unsigned c = lo; c <= hi; ++c) members.set(c);
        }
        if (pos_ >= src_.size() || src_[pos_] != ']') {
            error(start, pos_, "unterminated character class");
            return make(Token::bad, start);
        }
        ++pos_;
        Token t = make(Token::klass, start);
        t.members = negate ? ~members : members;
        t.text = std::string(src_.substr(start, pos_ - start));
        return t;
    }

    std::string_view src_;
    std::vector<GrammarFileError>& errors_;
    std::size_t pos_ = 0;
};

inline bool is_reserved(std::string_view w) {
    return w == "lex" || w == "label" || w == "e" || w == "expect" || w == "try" || w == "nofail";
}

inline bool is_name(std::string_view w) { return !w.empty() && !(w[0] >= '0' && w[0] <= '9'); }

class GrammarReader {
public:
    explicit GrammarReader(std::string_view src) : src_(src) {}

    GrammarParse run() {
        toks_ = Lexer(src_, errors_).run();
        while (peek().kind != Token::end) {
            std::size_t before = errors_.size();
            std::size_t at = i_;
            declaration();
            if (errors_.size() != before) {
                // A declaration rejected at its first token still looks like a
                // declaration start; step over it so resync makes progress.
                if (i_ == at) take();
                resync();
            }
        }
        check_references();
        GrammarParse out;
        out.errors = std::move(errors_);
        if (out.errors.empty()) {
            if (rules_.empty()) {
                out.errors.push_back({{0, src_.size()}, "grammar has no rules"});
                return out;
            }
            Grammar g;
            for (auto& [label, decl] : labels_) g.declare_label(label, decl.message);
            if (uses_error_ && !g.has_label(error_label)) g.declare_label(error_label);
            for (auto& r : rules_) g.add_rule(r.name, r.body, r.lexical);
            out.grammar = std::move(g);
        }
        return out;
    }

private:
    struct ParseError {};

    struct RuleDecl {
        std::string name;
        ExprPtr body;
        bool lexical;
    };

    struct LabelDecl {
        std::optional<std::string> message;
        SourceSpan span;
    };

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }

    const Token& take() {
        const Token& t = toks_[i_];
        if (i_ + 1 < toks_.size()) ++i_;
        return t;
    }

    [[noreturn]] void fail(const Token& t, std::string msg) {
        errors_.push_back({t.span, std::move(msg)});
        throw ParseError{};
    }

    const Token& expect_token(Token::Kind k, const char* what) {
        if (peek().kind != k) fail(peek(), std::string("expected ") + what);
        return take();
    }

    bool at_declaration() const {
        const Token& t = peek();
        if (t.kind == Token::end) return true;
        if (t.kind != Token::word) return false;
        if (t.text == "lex" || t.text == "label") return true;
        return peek(1).kind == Token::arrow;
    }

    void resync() {
        while (peek().kind != Token::end && !(peek().line_start && at_declaration())) take();
    }

    void declaration() {
        if (peek().kind == Token::bad) {
            take();  // already reported by the lexer
            return;
        }
        try {
            const Token& first = peek();
            if (first.kind == Token::word && first.text == "label") {
                take();
                label_declaration();
            } else if (first.kind == Token::word && first.text == "lex") {
                take();
                rule(true);
            } else {
                rule(false);
            }
        } catch (const ParseError&) {
        }
    }

    void label_declaration() {
        const Token& name = expect_token(Token::word, "label name");
        std::optional<std::string> message;
        if (peek().kind == Token::equals) {
            take();
            message = expect_token(Token::literal, "quoted message").text;
        }
        if (name.text == "fail") fail(name, "label 'fail' is implicit and cannot be declared");
        if (labels_.count(Label{name.text})) fail(name, "label '" + name.text + "' is already declared");
        labels_[Label{name.text}] = LabelDecl{std::move(message), name.span};
    }

    void rule(bool lexical) {
        const Token& name = peek();
        if (name.kind != Token::word || peek(1).kind != Token::arrow) fail(name, "malformed rule; expected Name <- expression");
        if (!is_name(name.text) || is_reserved(name.text)) fail(name, "'" + name.text + "' cannot name a rule");
        take();
        take();
        if (seen_.count(name.text)) fail(name, "duplicate rule '" + name.text + "'");
        SurfaceExpr body = choice_expr();
        if (peek().kind != Token::end && !(peek().line_start && at_declaration()))
            fail(peek(), "unexpected text after rule body");
        seen_.insert(name.text);
        rules_.push_back({name.text, desugar(body), lexical});
    }

    static SurfaceExpr node(SurfaceExpr::Kind k, std::vector<SurfaceExpr> args, SourceSpan span) {
        SurfaceExpr s;
        s.kind = k;
        s.args = std::move(args);
        s.span = span;
        return s;
    }

    LabelSet label_list() {
        LabelSet out;
        for (;;) {
            const Token& t = expect_token(Token::word, "label name");
            use_label(t);
            out.insert(Label{t.text});
            if (peek().kind == Token::rbrace) break;
            expect_token(Token::comma, "',' or '}'");
        }
        take();
        return out;
    }

    SurfaceExpr choice_expr() {
        SurfaceExpr left = sequence_expr();
        while (peek().kind == Token::slash) {
            take();
            LabelSet catches{fail_label};
            if (peek().kind == Token::lbrace) {
                take();
                catches = label_list();
            }
            SurfaceExpr right = sequence_expr();
            SourceSpan span{left.span.start, right.span.end};
            left = node(SurfaceExpr::Kind::choice, {std::move(left), std::move(right)}, span);
            left.catches = std::move(catches);
        }
        return left;
    }

    bool starts_prefix() const {
        const Token& t = peek();
        switch (t.kind) {
            case Token::terminal:
            case Token::literal:
            case Token::klass:
            case Token::dot:
            case Token::bang:
            case Token::amp:
            case Token::lparen:
            case Token::caret:
            case Token::bad: return true;
            case Token::word: return peek(1).kind != Token::arrow && t.text != "lex" && t.text != "label";
            default: return false;
        }
    }

    SurfaceExpr sequence_expr() {
        if (!starts_prefix()) fail(peek(), "expected an expression");
        SurfaceExpr left = prefix_expr();
        while (starts_prefix() && !(peek().line_start && at_declaration())) {
            SurfaceExpr right = prefix_expr();
            SourceSpan span{left.span.start, right.span.end};
            left = node(SurfaceExpr::Kind::sequence, {std::move(left), std::move(right)}, span);
        }
        return left;
    }

    SurfaceExpr prefix_expr() {
        if (peek().kind == Token::bang || peek().kind == Token::amp) {
            const Token& op = take();
            auto kind = op.kind == Token::bang ? SurfaceExpr::Kind::not_ : SurfaceExpr::Kind::and_;
            std::size_t start = op.span.start;
            SurfaceExpr body = prefix_expr();
            SourceSpan span{start, body.span.end};
            return node(kind, {std::move(body)}, span);
        }
        return postfix_expr();
    }

    SurfaceExpr postfix_expr() {
        SurfaceExpr e = primary();
        for (;;) {
            SurfaceExpr::Kind k;
            switch (peek().kind) {
                case Token::star: k = SurfaceExpr::Kind::star; break;
                case Token::plus: k = SurfaceExpr::Kind::plus; break;
                case Token::question: k = SurfaceExpr::Kind::optional; break;
                default: return e;
            }
            const Token& op = take();
            SourceSpan span{e.span.start, op.span.end};
            e = node(k, {std::move(e)}, span);
        }
    }

    static SurfaceExpr atom(ExprPtr a, SourceSpan span) {
        SurfaceExpr s;
        s.atom = std::move(a);
        s.span = span;
        return s;
    }

    SurfaceExpr primary() {
        const Token& t = take();
        switch (t.kind) {
            case Token::terminal: return atom(terminal(static_cast<unsigned char>(t.text[0])), t.span);
            case Token::literal: return atom(literal(t.text), t.span);
            case Token::klass: return atom(char_class(t.members, t.text), t.span);
            case Token::dot: return atom(any(), t.span);
            case Token::caret: {
                const Token& l = expect_token(Token::word, "label name after '^'");
                use_label(l);
                return atom(throw_(l.text), {t.span.start, l.span.end});
            }
            case Token::lparen: {
                SurfaceExpr e = choice_expr();
                const Token& close = expect_token(Token::rparen, "')'");
                e.span = {t.span.start, close.span.end};
                return e;
            }
            case Token::bad: return atom(empty(), t.span);  // reported by the lexer
            case Token::word: break;
            default: fail(t, "expected an expression");
        }
        if (t.text == "e") return atom(empty(), t.span);
        if (t.text == "expect" || t.text == "try" || t.text == "nofail") {
            std::size_t start = t.span.start;
            std::string form = t.text;
            expect_token(Token::lparen, "'(' after form name");
            SurfaceExpr body = choice_expr();
            SurfaceExpr out;
            if (form == "expect") {
                expect_token(Token::comma, "',' in expect(p, label)");
                const Token& l = expect_token(Token::word, "label name");
                use_label(l);
                out = node(SurfaceExpr::Kind::expect, {std::move(body)}, {});
                out.label = Label{l.text};
            } else {
                uses_error_ = true;
                out = node(form == "try" ? SurfaceExpr::Kind::try_ : SurfaceExpr::Kind::nofail, {std::move(body)}, {});
            }
            const Token& close = expect_token(Token::rparen, "')'");
            out.span = {start, close.span.end};
            return out;
        }
        if (is_reserved(t.text) || !is_name(t.text)) fail(t, "'" + t.text + "' is not a rule name");
        refs_.emplace_back(t.text, t.span);
        return atom(nonterminal(t.text), t.span);
    }

    void use_label(const Token& t) { label_uses_.emplace_back(t.text, t.span); }

    void check_references() {
        for (auto& [name, span] : refs_)
            if (!seen_.count(name)) errors_.push_back({span, "unknown rule '" + name + "'"});
        for (auto& [name, span] : label_uses_) {
            Label l{name};
            if (l == fail_label || labels_.count(l) || (l == error_label && uses_error_)) continue;
            errors_.push_back({span, "undeclared label '" + name + "'"});
        }
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    std::vector<GrammarFileError> errors_;
    std::vector<RuleDecl> rules_;
    std::set<std::string> seen_;
    std::map<Label, LabelDecl> labels_;
    std::vector<std::pair<std::string, SourceSpan>> refs_;
    std::vector<std::pair<std::string, SourceSpan>> label_uses_;
    bool uses_error_ = false;
};

}  // namespace detail

/// Reads a grammar file. On any error the grammar is absent and every error
/// found is listed, each with the byte span it refers to.
inline GrammarParse parse_grammar(std::string_view text) { return detail::GrammarReader(text).run(); }

/// "path:line:col: message" for a grammar-file error.
inline std::string format_error(std::string_view path, std::string_view text, const GrammarFileError& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.span.start && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::string(path) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.message;
}

}  // namespace labelpeg

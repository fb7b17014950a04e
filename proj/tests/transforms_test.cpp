#include <gtest/gtest.h>

#include <random>

#include "labelpeg.hpp"
#include "support/assets.hpp"
#include "support/random_grammar.hpp"

using namespace labelpeg;
using namespace labelpeg::testing;

TEST(DesugarStar, FreshRulePerRepetition) {
    Grammar d = desugar_star(grammar_from("S <- 'a'* 'b'\n"));
    ASSERT_EQ(d.rules().size(), 2u);
    EXPECT_EQ(d.start(), "S");
    EXPECT_EQ(d.body("S"), *seq(nonterminal("S_star1"), terminal('b')));
    EXPECT_EQ(d.body("S_star1"), *choice(seq(terminal('a'), nonterminal("S_star1")), empty()));
}

TEST(DesugarStar, NestedAndCollidingNames) {
    Grammar d = desugar_star(grammar_from("S <- ('a' 'b'*)* S_star1\nS_star1 <- 'c'\n"));
    EXPECT_EQ(d.rules().size(), 4u);
    EXPECT_EQ(d.body("S_star1"), *terminal('c'));
    EXPECT_EQ(d.body("S_star2"), *choice(seq(terminal('b'), nonterminal("S_star2")), empty()));
    EXPECT_EQ(d.body("S_star3"),
              *choice(seq(seq(terminal('a'), nonterminal("S_star2")), nonterminal("S_star3")), empty()));
    EXPECT_TRUE(validate(d).empty());
}

TEST(DesugarStar, KeepsLabelsAndLexicalFlags) {
    Grammar g = grammar_from("label x = \"m\"\nS <- A* ^x\nlex A <- 'a'+\n");
    Grammar d = desugar_star(g);
    EXPECT_EQ(d.message(Label{"x"}), std::optional<std::string>("m"));
    EXPECT_TRUE(d.is_lexical("A"));
    for (const char* in : {"", "aaa", "ab"}) EXPECT_EQ(match_labeled(g, in).result, match_labeled(d, in).result) << in;
}

TEST(TryNofail, Expansions) {
    auto p = terminal('a');
    EXPECT_EQ(*expand_nofail(p), *choice(p, throw_(error_label)));
    EXPECT_EQ(*expand_try(p), *choice(p, throw_(fail_label), LabelSet{error_label}));
    EXPECT_TRUE(is_try(*expand_try(p)->as<expr::Choice>()));
    EXPECT_FALSE(is_nofail(*expand_try(p)->as<expr::Choice>()));
    EXPECT_TRUE(is_nofail(*expand_nofail(p)->as<expr::Choice>()));
}

TEST(FourValues, RejectsWhatItCannotTranslate) {
    EXPECT_THROW(four_values(star(terminal('a'))), TransformError);
    EXPECT_THROW(four_values(not_(terminal('a'))), TransformError);
    EXPECT_THROW(four_values(throw_(Label{"x"})), TransformError);
    EXPECT_THROW(four_values(choice(terminal('a'), terminal('b'), LabelSet{Label{"x"}})), TransformError);
    Grammar g = grammar_from("label epsn\nS <- 'a'\n");
    EXPECT_THROW(four_values(g), TransformError);
}

TEST(FourValues, AtomsAndShapes) {
    EXPECT_EQ(*four_values(terminal('a')), *terminal('a'));
    EXPECT_EQ(*four_values(empty()), *throw_(epsn_label));
    auto p1 = terminal('a');
    auto p2 = terminal('b');
    EXPECT_EQ(*four_values(seq(p1, p2)),
              *choice(seq(p1, choice(choice(p2, throw_(error_label)), empty(), LabelSet{epsn_label})), p2,
                      LabelSet{epsn_label}));
    EXPECT_EQ(*four_values(choice(p1, p2)),
              *choice(choice(p1, choice(p2, throw_(epsn_label)), LabelSet{epsn_label}), p2));
    EXPECT_EQ(*four_values(literal("ab")), *four_values(seq(terminal('a'), terminal('b'))));
}

TEST(FourValues, LexicalRulesStayTokens) {
    Grammar g = grammar_from("S <- A 'x'\nlex A <- B 'y'\nB <- 'z'?\n");
    Grammar t = four_values(g);
    EXPECT_EQ(t.body("A"), g.body("A"));
    EXPECT_EQ(t.body("B"), g.body("B"));
    EXPECT_FALSE(t.body("S") == g.body("S"));
    EXPECT_TRUE(t.has_label(epsn_label));
    EXPECT_TRUE(t.has_label(error_label));
}

TEST(FourValue, Rendering) {
    EXPECT_EQ(to_string(FourValue::ok(3)), "OK(3)");
    EXPECT_EQ(to_string(FourValue::epsn()), "Epsn");
    EXPECT_EQ(to_string(FourValue::fail()), "Fail");
    EXPECT_EQ(to_string(FourValue::error()), "Error");
    EXPECT_THROW(classify_outcome(LabeledResult::consumed(2), 2), std::logic_error);
    EXPECT_THROW(classify_outcome(LabeledResult::raised(Label{"x"}, 0), 0), std::logic_error);
    EXPECT_EQ(classify_outcome(LabeledResult::raised(error_label, 4), 0), FourValue::error());
}

namespace {

// The four-valued meaning of a throw-free, predicate-free expression,
// computed directly instead of through the label encoding.
FourValue direct(const Expression& e, std::string_view in, Position i) {
    if (e.is<expr::Empty>()) return FourValue::epsn();
    if (const auto* t = e.as<expr::Terminal>())
        return i < in.size() && static_cast<unsigned char>(in[i]) == t->ch ? FourValue::ok(i + 1) : FourValue::fail();
    if (const auto* s = e.as<expr::Sequence>()) {
        FourValue a = direct(*s->left, in, i);
        if (a.kind() == FourValue::Kind::epsn) return direct(*s->right, in, i);
        if (a.kind() != FourValue::Kind::ok) return a;
        FourValue b = direct(*s->right, in, a.end());
        if (b.kind() == FourValue::Kind::ok) return b;
        if (b.kind() == FourValue::Kind::epsn) return a;
        return FourValue::error();
    }
    const auto* c = e.as<expr::Choice>();
    if (is_try(*c)) {
        FourValue a = direct(*c->left, in, i);
        return a.kind() == FourValue::Kind::error ? FourValue::fail() : a;
    }
    if (is_nofail(*c)) {
        FourValue a = direct(*c->left, in, i);
        return a.kind() == FourValue::Kind::fail ? FourValue::error() : a;
    }
    FourValue a = direct(*c->left, in, i);
    if (a.kind() == FourValue::Kind::ok || a.kind() == FourValue::Kind::error) return a;
    FourValue b = direct(*c->right, in, i);
    if (a.kind() == FourValue::Kind::fail) return b;
    if (b.kind() == FourValue::Kind::fail) return FourValue::epsn();
    return b;
}

ExprPtr random_expr(std::mt19937& rng, int depth) {
    int pick = std::uniform_int_distribution<int>(0, depth > 0 ? 6 : 2)(rng);
    switch (pick) {
        case 0: return terminal('a');
        case 1: return terminal('b');
        case 2: return empty();
        case 3: return seq(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 4: return choice(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 5: return expand_try(random_expr(rng, depth - 1));
        default: return expand_nofail(random_expr(rng, depth - 1));
    }
}

FourValue via_labels(const ExprPtr& e, const std::string& in) {
    Grammar g;
    g.declare_label(epsn_label);
    g.declare_label(error_label);
    return classify_outcome(match_labeled_expr(g, *four_values(e), in).result, 0);
}

}  // namespace

TEST(FourValues, TableForSequenceAndChoice) {
    // Each atom realizes one outcome on "ab" at offset 0; OK atoms consume
    // one symbol so a second OK continues at offset 1.
    std::vector<std::pair<std::string, ExprPtr>> atoms{
        {"Error", seq(terminal('a'), terminal('z'))},
        {"Fail", terminal('z')},
        {"Epsn", empty()},
        {"OK", choice(terminal('a'), terminal('b'))},
    };
    const std::string in = "ab";
    for (const auto& [n1, p1] : atoms)
        for (const auto& [n2, p2] : atoms) {
            for (const auto& e : {seq(p1, p2), choice(p1, p2)}) {
                FourValue want = direct(*e, in, 0);
                EXPECT_EQ(via_labels(e, in), want) << n1 << " " << n2 << " " << to_string(*e);
            }
        }
    // Spot values straight from the table.
    auto ok = atoms[3].second;
    auto fail = atoms[1].second;
    auto err = atoms[0].second;
    auto eps = atoms[2].second;
    EXPECT_EQ(via_labels(seq(ok, ok), in), FourValue::ok(2));
    EXPECT_EQ(via_labels(seq(ok, fail), in), FourValue::error());
    EXPECT_EQ(via_labels(choice(ok, err), in), FourValue::ok(1));
    EXPECT_EQ(via_labels(choice(fail, eps), in), FourValue::epsn());
    EXPECT_EQ(via_labels(choice(eps, fail), in), FourValue::epsn());
    EXPECT_EQ(via_labels(seq(eps, ok), in), FourValue::ok(1));
    EXPECT_EQ(via_labels(seq(err, ok), in), FourValue::error());
}

TEST(FourValues, AgreesWithDirectSemanticsOnRandomExpressions) {
    std::mt19937 rng(4242);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        ExprPtr e = random_expr(rng, 4);
        for (const auto& in : all_strings("ab", 3)) {
            ASSERT_EQ(via_labels(e, in), direct(*e, in, 0)) << to_string(*e) << " on \"" << in << "\"";
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(FourValues, TerminalIsNeverEpsnOrError) {
    for (unsigned c : {0x61u, 0x62u, 0x0au, 0xffu})
        for (const auto& in : all_strings("ab\n", 2)) {
            FourValue v = via_labels(terminal(static_cast<unsigned char>(c)), in);
            EXPECT_TRUE(v.kind() == FourValue::Kind::ok || v.kind() == FourValue::Kind::fail);
        }
}

TEST(FourValues, NestedNofailIsNofail) {
    std::mt19937 rng(77);
    for (int i = 0; i < 300; ++i) {
        ExprPtr p = random_expr(rng, 3);
        for (const auto& in : all_strings("ab", 2))
            EXPECT_EQ(via_labels(expand_nofail(expand_nofail(p)), in), via_labels(expand_nofail(p), in));
    }
}

TEST(FourValues, TryMakesAnErrorBacktrackable) {
    auto classify = [](const std::string& text, const std::string& in) {
        Grammar g = four_values(desugar_star(grammar_from(text)));
        return classify_outcome(match_labeled(g, in).result, 0);
    };
    EXPECT_EQ(classify("S <- \"repeat\" / \"read\"\n", "read x;"), FourValue::error());
    EXPECT_EQ(classify("S <- try(\"repeat\") / \"read\"\n", "read x;"), FourValue::ok(4));
    EXPECT_EQ(classify("S <- nofail('a')\n", "b"), FourValue::error());
}

TEST(FourValues, LlOneGrammarKeepsItsVerdicts) {
    // No alternative of this grammar starts like another, so committing
    // after the first symbol never loses a parse.
    const std::string text =
        "S <- 'x' '=' E ';' / 'p' E ';'\n"
        "E <- 'n' T / '(' E ')' T\n"
        "T <- '+' E / e\n";
    Grammar plain = grammar_from(text);
    Grammar fv = four_values(desugar_star(plain));
    int cases = 0;
    for (const auto& in : all_strings("x=n;p+()", 5)) {
        auto p = match_plain(plain, in);
        FourValue v = classify_outcome(match_labeled(fv, in).result, 0);
        if (p.ok()) {
            EXPECT_EQ(v, FourValue::ok(p.end())) << in;
        } else {
            EXPECT_TRUE(v.kind() == FourValue::Kind::fail || v.kind() == FourValue::Kind::error) << in;
        }
        ++cases;
    }
    EXPECT_GT(cases, 1000);
}

TEST(FourValues, TinyRunsAfterTranslation) {
    Grammar g = four_values(desugar_star(load_grammar("grammars/tiny.peg")));
    EXPECT_TRUE(validate(g).empty());
    std::string good = read_asset("samples/gcd.tiny");
    EXPECT_EQ(match_labeled(g, good).result, LabeledResult::consumed(good.size()));
    std::string bad = read_asset("samples/factorial.tiny");
    auto r = match_labeled(g, bad).result;
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.label(), error_label);
}

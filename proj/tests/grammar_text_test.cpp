#include <gtest/gtest.h>

#include "labelpeg.hpp"
#include "support/assets.hpp"
#include "support/random_grammar.hpp"

using namespace labelpeg;
using namespace labelpeg::testing;

namespace {

ExprPtr start_body(const std::string& text) {
    Grammar g = grammar_from(text);
    return g.find(g.start())->body;
}

std::vector<std::string> error_messages(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& e : parse_grammar(text).errors) out.push_back(e.message);
    return out;
}

}  // namespace

TEST(GrammarText, DefaultChoice) {
    EXPECT_EQ(*start_body("S <- 'a' / 'b'\n"), *choice(terminal('a'), terminal('b'), LabelSet{fail_label}));
}

TEST(GrammarText, AndPredicateIsDoubleNegation) {
    EXPECT_EQ(*start_body("S <- &'a' 'a'\n"), *seq(not_(not_(terminal('a'))), terminal('a')));
}

TEST(GrammarText, ExpectIsChoiceWithThrow) {
    EXPECT_EQ(*start_body("label miss = \"missing a\"\nS <- expect('a', miss)\n"),
              *choice(terminal('a'), throw_("miss"), LabelSet{fail_label}));
}

TEST(GrammarText, PostfixSugar) {
    EXPECT_EQ(*start_body("S <- 'a'+\n"), *seq(terminal('a'), star(terminal('a'))));
    EXPECT_EQ(*start_body("S <- 'a'?\n"), *choice(terminal('a'), empty()));
    EXPECT_EQ(*start_body("S <- !.\n"), *not_(any()));
}

TEST(GrammarText, ChoiceAndSequenceAreLeftAssociative) {
    EXPECT_EQ(*start_body("S <- 'a' / 'b' /{x} 'c'\nlabel x\n"),
              *choice(choice(terminal('a'), terminal('b')), terminal('c'), LabelSet{Label{"x"}}));
    EXPECT_EQ(*start_body("S <- 'a' 'b' 'c'\n"), *seq(seq(terminal('a'), terminal('b')), terminal('c')));
    EXPECT_EQ(*start_body("S <- 'a' ('b' 'c')\n"), *seq(terminal('a'), seq(terminal('b'), terminal('c'))));
}

TEST(GrammarText, TryAndNofailDeclareError) {
    Grammar g = grammar_from("S <- try('a') nofail('b')\n");
    EXPECT_TRUE(g.has_label(error_label));
    EXPECT_EQ(g.body("S"), *seq(expand_try(terminal('a')), expand_nofail(terminal('b'))));
}

TEST(GrammarText, AtomsAndEscapes) {
    EXPECT_EQ(*start_body("S <- '\\n' '\\x41' '\\''\n"), *seq(terminal('\n'), terminal('A'), terminal('\'')));
    EXPECT_EQ(*start_body("S <- \"a\\\"b\"\n"), *literal("a\"b"));
    auto cls = start_body("S <- [a-c_]\n");
    const auto* c = cls->as<expr::Class>();
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->name, "[a-c_]");
    EXPECT_EQ(c->members.count(), 4u);
    EXPECT_TRUE(c->members.test('b'));
    auto neg = start_body("S <- [^}]\n")->as<expr::Class>();
    ASSERT_NE(neg, nullptr);
    EXPECT_EQ(neg->members.count(), 255u);
    EXPECT_FALSE(neg->members.test('}'));
}

TEST(GrammarText, LexicalRulesLabelsAndComments) {
    Grammar g = grammar_from(
        "# comment line\n"
        "label sc = \"there is a missing ';'\"  # trailing comment\n"
        "S <- A\n"
        "   A          # rules may continue on the next line\n"
        "lex A <- ';'\n");
    EXPECT_EQ(g.start(), "S");
    EXPECT_TRUE(g.is_lexical("A"));
    EXPECT_FALSE(g.is_lexical("S"));
    EXPECT_EQ(g.message(Label{"sc"}), std::optional<std::string>("there is a missing ';'"));
    EXPECT_EQ(g.body("S"), *seq(nonterminal("A"), nonterminal("A")));
}

TEST(GrammarText, Errors) {
    EXPECT_EQ(error_messages("S <- 'a'\nS <- 'b'\n"), std::vector<std::string>{"duplicate rule 'S'"});
    EXPECT_EQ(error_messages("label x\nlabel x\nS <- ^x\n"), std::vector<std::string>{"label 'x' is already declared"});
    EXPECT_EQ(error_messages("label fail = \"m\"\nS <- 'a'\n"),
              std::vector<std::string>{"label 'fail' is implicit and cannot be declared"});
    EXPECT_EQ(error_messages("S <- '\\q'\n"), std::vector<std::string>{"unknown escape '\\q'"});
    EXPECT_EQ(error_messages("S <- T\n"), std::vector<std::string>{"unknown rule 'T'"});
    EXPECT_EQ(error_messages("S <- ^nope\n"), std::vector<std::string>{"undeclared label 'nope'"});
    EXPECT_EQ(error_messages("S 'a'\n"), std::vector<std::string>{"malformed rule; expected Name <- expression"});
    EXPECT_EQ(error_messages("S <- 'ab'\n").size(), 1u);
    EXPECT_EQ(error_messages("S <- \"\"\n").size(), 1u);
    EXPECT_EQ(error_messages("S <- ('a'\n").size(), 1u);
    EXPECT_EQ(error_messages("").size(), 1u);
}

TEST(GrammarText, RecoversAtTheNextDeclaration) {
    auto parsed = parse_grammar("S <- (\nT <- 'a' )\nU <- 'b'\nU <- 'c'\n");
    EXPECT_FALSE(parsed.ok());
    ASSERT_EQ(parsed.errors.size(), 3u);
    EXPECT_EQ(parsed.errors[2].message, "duplicate rule 'U'");
}

TEST(GrammarText, BadRuleNamesDoNotStallTheReader) {
    EXPECT_EQ(error_messages("1 <- 'a'\n"), std::vector<std::string>{"'1' cannot name a rule"});
    EXPECT_EQ(error_messages("e <- 'a'\nS <- 'b'\n"), std::vector<std::string>{"'e' cannot name a rule"});
    EXPECT_EQ(error_messages("lex <- 'a'\n").size(), 1u);
}

TEST(GrammarText, SpansPointIntoTheFile) {
    std::string text = "S <- A\nlabel k\nT <- ^q '\\z'\n";
    auto parsed = parse_grammar(text);
    ASSERT_EQ(parsed.errors.size(), 3u);
    for (const auto& e : parsed.errors) {
        EXPECT_LE(e.span.start, e.span.end);
        EXPECT_LE(e.span.end, text.size());
    }
    EXPECT_EQ(format_error("g.peg", text, parsed.errors[0]), "g.peg:3:10: unknown escape '\\z'");
    EXPECT_EQ(text.substr(parsed.errors[1].span.start, 1), "A");
}

TEST(GrammarText, SpansOfRandomBrokenFilesStayInside) {
    GrammarGen gen(5);
    const std::string noise = "<-/{}()'\"[]!&*+?^=.\\ \nabeS#1";
    for (int i = 0; i < 500; ++i) {
        std::string text;
        for (int k = 0, n = gen.below(40); k < n; ++k) text += noise[gen.below(static_cast<int>(noise.size()))];
        // Declaration-shaped fragments, including ones with rejected names.
        if (i % 4 == 0) text = "1 <- " + text;
        if (i % 4 == 1) text += "\ne <- a\nlabel\nlex <- ";
        auto parsed = parse_grammar(text);
        for (const auto& e : parsed.errors) {
            EXPECT_LE(e.span.start, e.span.end) << text;
            EXPECT_LE(e.span.end, text.size()) << text;
        }
    }
}

TEST(GrammarText, PrintThenParseIsIdentity) {
    GenOptions opt;
    opt.throws = true;
    GrammarGen gen(17, opt);
    for (int i = 0; i < 300; ++i) {
        Grammar g = gen.grammar();
        if (i % 3 == 0) g.set_lexical("R1");
        if (i % 5 == 0) g.declare_label(Label{"x"}, "an \"x\"\n");
        std::string text = to_string(g);
        auto again = parse_grammar(text);
        ASSERT_TRUE(again.ok()) << text << "\n" << again.errors.front().message;
        EXPECT_EQ(*again.grammar, g) << text;
    }
}

TEST(GrammarText, ShippedGrammarsRoundTrip) {
    for (const char* f : {"grammars/tiny.peg", "grammars/tiny-labeled.peg", "grammars/llstar.peg"}) {
        Grammar g = load_grammar(f);
        EXPECT_EQ(grammar_from(to_string(g)), g) << f;
    }
}

TEST(Desugar, IdempotentOnCoreExpressions) {
    GenOptions opt;
    opt.throws = true;
    GrammarGen gen(23, opt);
    for (int i = 0; i < 500; ++i) {
        ExprPtr e = gen.expr(6);
        ExprPtr once = desugar(lift(e));
        EXPECT_EQ(*once, *e);
        EXPECT_EQ(*desugar(lift(once)), *once);
    }
}

TEST(Desugar, OutputUsesCoreFormsOnly) {
    SurfaceExpr a;
    a.atom = terminal('a');
    SurfaceExpr plus;
    plus.kind = SurfaceExpr::Kind::plus;
    plus.args = {a};
    SurfaceExpr opt;
    opt.kind = SurfaceExpr::Kind::optional;
    opt.args = {plus};
    EXPECT_EQ(*desugar(opt), *choice(seq(terminal('a'), star(terminal('a'))), empty()));
}

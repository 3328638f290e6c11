#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "tracecast/rule_io.hpp"
#include "tracecast/subshift_io.hpp"
#include "tracecast/verify.hpp"

using namespace tracecast;

namespace {
const Alphabet bin = Alphabet::binary();
}

TEST_CASE("subshift files parse") {
    LoadedSubshift sft = parse_subshift("alphabet: 0 1\nkind: sft\norder: 2\nforbidden: 11\n");
    REQUIRE(sft.sft.has_value());
    REQUIRE(equal(sft.graph, sft_to_graph(Sft::from_forbidden(bin, 2, {support::word(bin, "11")}))));

    LoadedSubshift expr = parse_subshift("alphabet: 0 1\nkind: expr\nexpr: (1+e)(01)^w\n");
    REQUIRE(equal(expr.graph, compile_expr("(1+e)(01)^w", bin)));

    LoadedSubshift graph = parse_subshift(
        "alphabet: 0 1\nkind: graph\nedge: p 0 p\nedge: p 1 q\nedge: q 0 p\n");
    REQUIRE(equal(graph.graph, sft.graph));

    // allowed form converts
    LoadedSubshift allowed =
        parse_subshift("alphabet: 0 1\nkind: sft\norder: 2\nallowed: 00 01 10\n");
    REQUIRE(equal(allowed.graph, sft.graph));
}

TEST_CASE("subshift parse errors") {
    REQUIRE_THROWS_AS(parse_subshift("kind: sft\norder: 2\n"), ParseError);
    REQUIRE_THROWS_AS(parse_subshift("alphabet: 0 1\nkind: sft\n"), ParseError);
    REQUIRE_THROWS_AS(parse_subshift("alphabet: 0 1\nkind: nope\n"), ParseError);
    REQUIRE_THROWS_AS(parse_subshift("alphabet: 0 1\nkind: sft\norder: 2\nforbidden: 111\n"), ParseError);
    REQUIRE_THROWS_AS(parse_subshift("alphabet: 0 1\nkind: graph\nedge: p 2 q\n"), ParseError);
}

TEST_CASE("subshift round trip") {
    for (const char* text : {
             "alphabet: 0 1\nkind: sft\norder: 2\nforbidden: 11\n",
             "alphabet: 0 1\nkind: expr\nexpr: 0^w+0*1^w\n",
             "alphabet: 0 1\nkind: graph\nedge: p 0 p\nedge: p 1 q\nedge: q 0 p\n",
         }) {
        LoadedSubshift a = parse_subshift(text);
        LoadedSubshift b = parse_subshift(save_subshift(a));
        REQUIRE(equal(a.graph, b.graph));
    }
    // multi-character alphabet: one word per line
    LoadedSubshift blocks = parse_subshift(
        "alphabet: 00 01 10 11\nkind: sft\norder: 2\nallowed: 01 01\nallowed: 01 10\n"
        "allowed: 10 00\nallowed: 00 00\nallowed: 11 11\nallowed: 11 00\n");
    LoadedSubshift reparsed = parse_subshift(save_subshift(blocks));
    REQUIRE(equal(blocks.graph, reparsed.graph));
}

TEST_CASE("rule files: wildcard first-match-wins") {
    LoadedRule r = parse_rule_file(
        "alphabet: 0 1\nanchor: 0\ndiameter: 2\nmap: 1? -> 0\nmap: ?1 -> 1\ndefault: identity\n");
    REQUIRE(r.rule.eval(support::word(bin, "10")) == 0);  // first row wins
    REQUIRE(r.rule.eval(support::word(bin, "11")) == 0);
    REQUIRE(r.rule.eval(support::word(bin, "01")) == 1);
    REQUIRE(r.rule.eval(support::word(bin, "00")) == 0);  // default: own state
}

TEST_CASE("rule files: phi default") {
    LoadedRule r = parse_rule_file("alphabet: 0 1\nanchor: 0\ndiameter: 1\ndefault: phi 0->1 1->0\n");
    REQUIRE(r.rule.eval(Word{0}) == 1);
    REQUIRE(r.rule.eval(Word{1}) == 0);
}

TEST_CASE("rule file round trip") {
    for (const char* name : {"negation", "shift", "identity", "non_t3", "particle"}) {
        LocalRule rule = builtin(name);
        LoadedRule re = parse_rule_file(save_rule_file(rule));
        REQUIRE(re.rule.alphabet() == rule.alphabet());
        REQUIRE(re.rule.anchor() == rule.anchor());
        REQUIRE(re.rule.diameter() == rule.diameter());
        REQUIRE(*re.rule.dense_table() == *rule.dense_table());
    }
}

TEST_CASE("rule file errors") {
    REQUIRE_THROWS_AS(parse_rule_file("alphabet: 0 1\ndiameter: 2\n"), ParseError);
    REQUIRE_THROWS_AS(parse_rule_file("alphabet: 0 1\nanchor: 0\ndiameter: 2\nmap: 0 -> 1\n"),
                      ParseError);  // wrong pattern length
    REQUIRE_THROWS_AS(parse_rule_file("alphabet: 0 1\nanchor: 0\ndiameter: 2\nmap: 00 -> 1\n"),
                      Error);  // not total, no default
}

TEST_CASE("synth rule round trip preserves behavior") {
    SoficGraph sigma = sft_to_graph(Sft::from_forbidden(bin, 2, {support::word(bin, "11")}));
    BlockAlphabet B1(bin, 1, {{0}, {1}});
    Sft gamma2(B1.as_alphabet(), 2, {{0, 0}, {0, 1}, {1, 0}});
    SynthesisResult r =
        synthesize(sigma, gamma2, B1, T3Witness{PhiMap{bin, {0, 0}}, support::word(bin, "01")});
    LoadedRule re = parse_rule_file(save_synth_rule_file(r));
    REQUIRE(re.synth.has_value());
    REQUIRE(re.rule.anchor() == r.rule.anchor());
    REQUIRE(re.rule.diameter() == r.rule.diameter());
    REQUIRE(re.synth->borders.upsilon == r.borders.upsilon);
    // identical behavior on random windows
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 500; ++trial) {
        Word w(static_cast<std::size_t>(r.rule.diameter()));
        for (Symbol& c : w) c = static_cast<Symbol>(rng() % 2);
        REQUIRE(re.rule.eval(w) == r.rule.eval(w));
    }
}

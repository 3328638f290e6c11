#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tracecast/omega.hpp"
#include "tracecast/verify.hpp"

using namespace tracecast;

namespace {
const Alphabet bin = Alphabet::binary();
}

TEST_CASE("builtin tables") {
    LocalRule p = builtin("particle");
    const Alphabet& a = p.alphabet();
    auto sym = [&](char c) { return *a.find(std::string(1, c)); };
    // f(r,l,?) = w by the first row
    for (Symbol x = 0; x < 4; ++x) {
        Word w{sym('r'), sym('l'), x};
        REQUIRE(p.eval(w) == sym('w'));
    }
    // walls persist
    for (Symbol x = 0; x < 4; ++x)
        for (Symbol y = 0; y < 4; ++y) {
            Word w{x, sym('w'), y};
            REQUIRE(p.eval(w) == sym('w'));
        }
    // the white default
    Word bbb{sym('b'), sym('b'), sym('b')};
    REQUIRE(p.eval(bbb) == sym('b'));

    LocalRule nt = builtin("non_t3");
    REQUIRE(nt.eval(support::word(bin, "1000111")) == 1);
    REQUIRE(nt.eval(support::word(bin, "0001110")) == 0);
    REQUIRE(nt.eval(support::word(bin, "1001011")) == 0);
    REQUIRE(nt.eval(support::word(bin, "0010111")) == 1);
    REQUIRE(nt.eval(support::word(bin, "1010101")) == 0);  // default: own state

    REQUIRE_THROWS_AS(builtin("nope"), Error);
}

TEST_CASE("builtin sources parse back to the same tables") {
    for (const char* name : {"particle", "non_t3"}) {
        LoadedRule reparsed = parse_rule_file(builtin_source(name));
        LocalRule direct = builtin(name);
        REQUIRE(reparsed.rule.alphabet() == direct.alphabet());
        REQUIRE(*reparsed.rule.dense_table() == *direct.dense_table());
    }
}

TEST_CASE("walled particle closed form") {
    REQUIRE(walled_particle_check(0, 0, 8));
    REQUIRE(walled_particle_check(1, 0, 8));
    REQUIRE(walled_particle_check(1, 2, 16));
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q) REQUIRE(walled_particle_check(p, q, 4 * (p + q + 1)));
}

TEST_CASE("compare_trace_language exact mode") {
    // negation vs the alternating subshift
    TraceReport r = compare_trace_language(builtin("negation"), compile_expr("(1+e)(01)^w", bin), 6,
                                           1 << 20);
    REQUIRE(r.mode == TraceReport::Mode::Exact);
    REQUIRE(r.verdict == TraceReport::Verdict::ExactEqual);

    // identity vs the full shift: misses 01
    TraceReport bad = compare_trace_language(builtin("identity"), SoficGraph::full_shift(bin), 3, 1 << 20);
    REQUIRE(bad.verdict == TraceReport::Verdict::ExactUnequal);
    REQUIRE(bad.missing.count(support::word(bin, "010")) == 1);
    REQUIRE(bad.extra.empty());

    // trace_2sft(golden) vs golden at n=8
    Sft gm = Sft::from_forbidden(bin, 2, {support::word(bin, "11")});
    TracerRule tr = trace_2sft(gm);
    TraceReport g = compare_trace_language(tr.rule, sft_to_graph(gm), 8, 1 << 20);
    REQUIRE(g.verdict == TraceReport::Verdict::ExactEqual);
}

TEST_CASE("compare_trace_language sampled mode on the Sigma' pipeline") {
    SoficGraph sigma = compile_expr("(0*1+1*)0^w", bin);
    BlockAlphabet ba(bin, 2, {support::word(bin, "00"), support::word(bin, "01"),
                              support::word(bin, "10"), support::word(bin, "11")});
    Alphabet balph = ba.as_alphabet();
    auto sym = [&](const char* s) { return *balph.find(s); };
    std::set<Word> allowed{{sym("01"), sym("01")}, {sym("01"), sym("10")}, {sym("10"), sym("00")},
                           {sym("00"), sym("00")}, {sym("11"), sym("11")}, {sym("11"), sym("00")}};
    SynthesisResult r = synthesize(sigma, Sft(balph, 2, allowed), ba,
                                   T3Witness{PhiMap{bin, {0, 0}}, support::word(bin, "1")});
    SamplingParams params;
    params.samples = 300;  // the acceptance suite runs the full 10^4
    params.steps = 100;
    SynthRuleParts parts{r.gamma_blocks, r.t3, r.inner, r.borders};
    TraceReport rep = compare_trace_language(r.rule, sigma, 6, 1 << 10, params, &parts, 5);
    REQUIRE(rep.mode == TraceReport::Mode::Sampled);
    REQUIRE(rep.extra.empty());
    REQUIRE(rep.verdict == TraceReport::Verdict::SampledOk);
}

TEST_CASE("stability_check on the golden pipeline") {
    SoficGraph sigma = sft_to_graph(Sft::from_forbidden(bin, 2, {support::word(bin, "11")}));
    BlockAlphabet B1(bin, 1, {{0}, {1}});
    Sft gamma2(B1.as_alphabet(), 2, {{0, 0}, {0, 1}, {1, 0}});
    SynthesisResult r = synthesize(sigma, gamma2, B1, T3Witness{PhiMap{bin, {0, 0}}, support::word(bin, "01")});
    StabilityReport rep = stability_check(r, 2000, 1);
    REQUIRE(rep.ok());
    REQUIRE(rep.samples == 2000);
}

TEST_CASE("border_columns_check") {
    BlockAlphabet B1(bin, 1, {{0}, {1}});
    PhiMap phi1{bin, {1, 1}};
    BorderSystem a = make_borders(B1, support::word(bin, "0"), phi1);
    REQUIRE(border_columns_check(a, compile_expr("0^w+0*1^w", bin)));

    BorderSystem b = make_borders(B1, support::word(bin, "01"), phi1);
    REQUIRE(border_columns_check(b, compile_expr("0*1^w + (1+e)(01)^w", bin)));
    REQUIRE(border_columns_check(b, SoficGraph::full_shift(bin)));
    // columns alternate, so a subshift without (01)^w refuses
    REQUIRE_FALSE(border_columns_check(b, compile_expr("0^w+0*1^w", bin)));
}

TEST_CASE("simulation_check over all columns") {
    SoficGraph sigma = sft_to_graph(Sft::from_forbidden(bin, 2, {support::word(bin, "11")}));
    BlockAlphabet B1(bin, 1, {{0}, {1}});
    Sft gamma2(B1.as_alphabet(), 2, {{0, 0}, {0, 1}, {1, 0}});
    SynthesisResult r = synthesize(sigma, gamma2, B1, T3Witness{PhiMap{bin, {0, 0}}, support::word(bin, "01")});
    for (std::vector<Symbol> y : {std::vector<Symbol>{0}, {1}, {0, 1}, {1, 0, 0}})
        REQUIRE(simulation_check(r, y, 30, 0));
}

TEST_CASE("factor_approximation keeps builtin trace subshifts T0") {
    for (const char* name : {"negation", "shift", "identity", "non_t3", "particle"}) {
        LocalRule rule = builtin(name);
        int n = rule.diameter() > 3 ? 4 : 5;
        ExactTraceResult f = exact_trace_factors(rule, n, 1 << 22);
        REQUIRE(f.factors.has_value());
        SoficGraph approx = factor_approximation(rule.alphabet(), *f.factors);
        auto t0 = check_t0(approx);
        REQUIRE(t0.has_value());
    }
}

TEST_CASE("non_t3 trace analysis (finite but not T3)") {
    LocalRule nt = builtin("non_t3");
    ExactTraceResult f = exact_trace_factors(nt, 4, 1 << 20);
    REQUIRE(*f.factors == support::words(bin, {"0000", "1111", "0101", "1010"}));
    SoficGraph approx = factor_approximation(bin, *f.factors);
    REQUIRE(check_t0(approx).has_value());
    REQUIRE(check_t3(approx, 4).status == T3Result::Status::NotFoundUpToBound);
}

TEST_CASE("ctrex sanity: the untraceable T1 example is T0 and balanced rules exist") {
    SoficGraph ctrex = compile_expr("0^w + (1+e)(01)^w", bin);
    auto t0 = check_t0(ctrex);
    REQUIRE(t0.has_value());
    REQUIRE(t0->image == std::vector<Symbol>{1, 0});
    // an unbalanced rule cannot be surjective, hence cannot trace it
    LocalRule constant = LocalRule::dense(bin, 0, 2, {0, 0, 0, 0});
    REQUIRE_FALSE(balance_check(constant));
}

TEST_CASE("cylinder spec") {
    CylinderSpec c(support::words(bin, {"01", "10"}), 2);
    REQUIRE(c.contains(support::word(bin, "0001"), 0));
    REQUIRE_FALSE(c.contains(support::word(bin, "0000"), 0));
    REQUIRE_FALSE(c.contains(support::word(bin, "01"), 0));
    REQUIRE_THROWS_AS(CylinderSpec({}, 0), Error);
}

TEST_CASE("the uniform-orbit map phi_F generates traces") {
    for (const char* name : {"negation", "shift", "identity", "non_t3", "particle"}) {
        LocalRule rule = builtin(name);
        const int asz = rule.alphabet().size();
        // phi_F(a) = F(a^omega)_0
        std::vector<Symbol> image;
        for (Symbol a = 0; a < asz; ++a)
            image.push_back(step_periodic(rule, PeriodicConfig(Word{a})).cells[0]);
        PhiMap phi{rule.alphabet(), image};
        for (Symbol a = 0; a < asz; ++a) {
            UPWord orbit = orbit_word(phi, a);
            Word traced = trace_periodic(rule, PeriodicConfig(Word{a}), 2 * asz);
            REQUIRE(orbit.prefix(traced.size()) == traced);
        }
    }
}

TEST_CASE("sampled findings never contradict exact findings") {
    // run the same comparison in exact mode and in forced-sampled mode
    LocalRule neg = builtin("negation");
    SoficGraph alt = compile_expr("(1+e)(01)^w", bin);
    TraceReport exact = compare_trace_language(neg, alt, 4, 1 << 20);
    REQUIRE(exact.verdict == TraceReport::Verdict::ExactEqual);
    SamplingParams params;
    params.samples = 500;
    params.steps = 50;
    TraceReport sampled = compare_trace_language(neg, alt, 4, 0, params);
    REQUIRE(sampled.mode == TraceReport::Mode::Sampled);
    REQUIRE(sampled.extra.empty());  // no refutation may appear when exact says equal

    // and where exact finds extra factors, sampling may only find a subset
    LocalRule shift_rule = builtin("shift");
    TraceReport exact2 = compare_trace_language(shift_rule, alt, 3, 1 << 20);
    REQUIRE(exact2.verdict == TraceReport::Verdict::ExactUnequal);
    TraceReport sampled2 = compare_trace_language(shift_rule, alt, 3, 0, params);
    for (const Word& w : sampled2.extra) REQUIRE(exact2.extra.count(w) == 1);
}

TEST_CASE("golden fixture files match the builtin sources") {
    const char* fx = std::getenv("TRACECAST_FIXTURES");
    std::string dir = fx ? fx : "tests/fixtures";
    for (const char* name : {"particle", "non_t3"}) {
        std::ifstream in(dir + "/" + name + ".rule");
        REQUIRE(in.good());
        std::stringstream ss;
        ss << in.rdbuf();
        REQUIRE(ss.str() == builtin_source(name));
        LoadedRule file_rule = parse_rule_file(ss.str());
        REQUIRE(*file_rule.rule.dense_table() == *builtin(name).dense_table());
    }
}

TEST_CASE("particle single step moves a left particle left") {
    LocalRule p = builtin("particle");
    const Alphabet& a = p.alphabet();
    // period word w 0 0 l 0 (walls bound the particle's zone)
    Word cells = a.parse_word("wbblb");
    PeriodicConfig next = step_periodic(p, PeriodicConfig(cells));
    REQUIRE(next.cells == a.parse_word("wblbb"));
}

TEST_CASE("golden pipeline sampled soundness") {
    SoficGraph sigma = sft_to_graph(Sft::from_forbidden(bin, 2, {support::word(bin, "11")}));
    BlockAlphabet B1(bin, 1, {{0}, {1}});
    Sft gamma2(B1.as_alphabet(), 2, {{0, 0}, {0, 1}, {1, 0}});
    SynthesisResult r =
        synthesize(sigma, gamma2, B1, T3Witness{PhiMap{bin, {0, 0}}, support::word(bin, "01")});
    SamplingParams params;
    params.samples = 1000;
    params.steps = 100;
    params.seed = 7;
    SynthRuleParts parts{r.gamma_blocks, r.t3, r.inner, r.borders};
    TraceReport rep = compare_trace_language(r.rule, sigma, 8, 0, params, &parts, 5);
    REQUIRE(rep.extra.empty());
    REQUIRE(rep.verdict == TraceReport::Verdict::SampledOk);
}

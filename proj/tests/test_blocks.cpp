#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "tracecast/omega.hpp"
#include "tracecast/sft.hpp"

using namespace tracecast;

namespace {
const Alphabet bin = Alphabet::binary();
}

TEST_CASE("higher_block of the golden mean") {
    Sft gm = Sft::from_forbidden(bin, 2, {support::word(bin, "11")});
    HigherBlock hb = higher_block(gm);
    REQUIRE(hb.blocks.k == 2);
    std::set<Word> blks(hb.blocks.blocks.begin(), hb.blocks.blocks.end());
    REQUIRE(blks == support::words(bin, {"00", "01", "10"}));
    // expected pairs by hand: overlap u[1] = v[0]
    auto sym = [&](const std::string& s) { return *hb.blocks.find_block(support::word(bin, s)); };
    std::set<Word> expect{{sym("00"), sym("00")}, {sym("00"), sym("01")}, {sym("01"), sym("10")},
                          {sym("10"), sym("00")}, {sym("10"), sym("01")}};
    REQUIRE(hb.sft2.allowed == expect);
}

TEST_CASE("higher_block of an order-1 full shift is itself") {
    Sft full(bin, 1, {{0}, {1}});
    HigherBlock hb = higher_block(full);
    REQUIRE(hb.blocks.k == 1);
    REQUIRE(hb.sft2.allowed.size() == 4);
    REQUIRE(equal(project(hb.sft2, hb.blocks, 0), SoficGraph::full_shift(bin)));
}

TEST_CASE("higher_block of the order-3 SFT forbidding 111") {
    Sft s = Sft::from_forbidden(bin, 3, {support::word(bin, "111")});
    HigherBlock hb = higher_block(s);
    REQUIRE(hb.blocks.size() == 7);
    // overlap pairs computed mechanically
    int count = 0;
    for (const Word& u : hb.blocks.blocks)
        for (const Word& v : hb.blocks.blocks)
            if (u[1] == v[0] && u[2] == v[1]) ++count;
    REQUIRE(static_cast<int>(hb.sft2.allowed.size()) == count);
    REQUIRE_THROWS_AS(higher_block(Sft(bin, 2, {})), Error);
}

TEST_CASE("project the 3-cycle of blocks onto rotations of (001)^w") {
    // Gamma = (uvw)^w with u=001, v=010, w=100 over A^3
    BlockAlphabet ba(bin, 3, {support::word(bin, "001"), support::word(bin, "010"), support::word(bin, "100")});
    Alphabet balph = ba.as_alphabet();
    SoficGraph cyc(balph, 3, {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}});
    SoficGraph pi0 = project(cyc, ba, 0);
    REQUIRE(equal(pi0, compile_expr("(01+1+e)(001)^w", bin)));
}

TEST_CASE("project with k=1 is a relabeling") {
    BlockAlphabet ba(bin, 1, {{0}, {1}});
    SoficGraph g = compile_expr("(01)^w", bin);
    // relabel through block symbols: rebuild g over ba's alphabet
    SoficGraph over_blocks(ba.as_alphabet(), g.num_vertices(), g.edges());
    REQUIRE(equal(project(over_blocks, ba, 0), g));
}

TEST_CASE("higher-block projections reproduce the subshift") {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 5) {
        int order = 1 + static_cast<int>(rng() % 3);
        Sft s(bin, order, support::random_allowed_set(rng, 2, order));
        Sft ess = essential_sft(s);
        if (ess.allowed.empty()) continue;
        SoficGraph sigma = sft_to_graph(ess);
        HigherBlock hb = higher_block(ess);
        REQUIRE(equal(project(hb.sft2, hb.blocks, 0), sigma));
        REQUIRE(equal(project_all(hb.sft2, hb.blocks), sigma));
        ++done;
    }
}

TEST_CASE("interleave with the identity radius-0 map pairs every symbol with itself") {
    Sft gm = Sft::from_forbidden(bin, 2, {support::word(bin, "11")});
    BlockMap id = BlockMap::radius0(bin, bin, {0, 1});
    BlockAlphabet unit(bin, 1, {{0}, {1}});
    Interleaved il = interleave_conjugate(gm, id, unit);
    for (const auto& [a, b] : il.pair_symbols) REQUIRE(a == b);
    REQUIRE(il.as_blocks.has_value());
    // first track projects back onto the golden mean
    REQUIRE(equal(project(il.sft, *il.as_blocks, 0), sft_to_graph(gm)));
    REQUIRE(equal(project(il.sft, *il.as_blocks, 1), sft_to_graph(gm)));
}

TEST_CASE("interleave a radius-0 relabeling of the golden mean") {
    Sft gm = Sft::from_forbidden(bin, 2, {support::word(bin, "11")});
    Alphabet ab({"a", "b"});
    BlockMap relabel = BlockMap::radius0(bin, ab, {0, 1});
    Interleaved il = interleave_conjugate(gm, relabel);
    REQUIRE_FALSE(il.as_blocks.has_value());
    // the pair SFT's factor count matches the golden mean's to length 6
    SoficGraph pair_graph = sft_to_graph(il.sft);
    SoficGraph gm_graph = sft_to_graph(gm);
    for (int n = 1; n <= 6; ++n) REQUIRE(pair_graph.factors(n).size() == gm_graph.factors(n).size());
}

TEST_CASE("interleave with a radius-1 map pins the target track") {
    // full shift source, map g(a,b) = a & !b: image is the golden mean
    Sft full(bin, 1, {{0}, {1}});
    BlockMap g;
    g.source = bin;
    g.target = bin;
    g.radius = 1;
    g.table[{0, 0}] = 0;
    g.table[{0, 1}] = 0;
    g.table[{1, 0}] = 1;
    g.table[{1, 1}] = 0;
    BlockAlphabet unit(bin, 1, {{0}, {1}});
    Interleaved il = interleave_conjugate(full, g, unit);
    REQUIRE(il.as_blocks.has_value());
    REQUIRE(equal(project(il.sft, *il.as_blocks, 0),
                  sft_to_graph(Sft::from_forbidden(bin, 2, {support::word(bin, "11")}))));
    REQUIRE(equal(project(il.sft, *il.as_blocks, 1), SoficGraph::full_shift(bin)));
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tracecast/alphabet.hpp"

using namespace tracecast;

TEST_CASE("alphabet basics") {
    Alphabet a({"0", "1"});
    REQUIRE(a.size() == 2);
    REQUIRE(a.find("1").value() == 1);
    REQUIRE_FALSE(a.find("2").has_value());
    REQUIRE_THROWS_AS(Alphabet({"0", "0"}), Error);
    REQUIRE(a.format({0, 1, 1}) == "011");

    Alphabet blocks({"00", "10"});
    REQUIRE(blocks.format({1, 0}) == "10 00");
    REQUIRE(blocks.parse_word("10 00") == Word{1, 0});
    REQUIRE(blocks.parse_word("1000") == Word{1, 0});
}

TEST_CASE("word utilities") {
    Word w{0, 1, 2};
    REQUIRE(rotated(w) == Word{1, 2, 0});
    REQUIRE(rotated_by(w, 2) == Word{2, 0, 1});
    REQUIRE(reversed(w) == Word{2, 1, 0});
    REQUIRE(decode_word(encode_word(w, 3), 3, 3) == w);
    REQUIRE(primitive_period({0, 1, 0, 1}) == 2);
    REQUIRE(primitive_period({0, 1, 1, 0}) == 4);
}

TEST_CASE("UPWord canonical form") {
    // 0(10)^w = (01)^w
    UPWord a({0}, {1, 0});
    UPWord b({}, {0, 1});
    REQUIRE(a == b);
    // period reduced to its primitive root
    UPWord c({}, {0, 1, 0, 1});
    REQUIRE(c == b);
    // 0 1^w stays put
    UPWord d({0}, {1});
    REQUIRE(d.preperiod == Word{0});
    REQUIRE(d.period == Word{1});
    REQUIRE(d.at(0) == 0);
    REQUIRE(d.at(5) == 1);
    REQUIRE(d.prefix(3) == Word{0, 1, 1});
    REQUIRE_THROWS_AS(UPWord({}, {}), Error);
}

TEST_CASE("UPWord canonicalization is sound on random words") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Word pre, per;
        int np = static_cast<int>(rng() % 4);
        int nq = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < np; ++i) pre.push_back(static_cast<Symbol>(rng() % 2));
        for (int i = 0; i < nq; ++i) per.push_back(static_cast<Symbol>(rng() % 2));
        UPWord z(pre, per);
        UPWord direct({}, per);
        // canonical form denotes the same infinite word
        for (std::size_t i = 0; i < 40; ++i) {
            Symbol expect = i < pre.size() ? pre[i] : per[(i - pre.size()) % per.size()];
            REQUIRE(z.at(i) == expect);
        }
        (void)direct;
    }
}

#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/sofic.hpp"

// Test-side oracles, kept independent of the library's automata machinery.

namespace support {

using tracecast::Alphabet;
using tracecast::Symbol;
using tracecast::Word;

inline Word word(const Alphabet& a, const std::string& text) { return a.parse_word(text); }

inline std::set<Word> words(const Alphabet& a, const std::vector<std::string>& texts) {
    std::set<Word> out;
    for (const auto& t : texts) out.insert(a.parse_word(t));
    return out;
}

/// Factors of length n of a set of ultimately periodic words given as
/// (preperiod, period) strings, by direct window sliding.
inline std::set<Word> up_factors(const Alphabet& a, const std::vector<std::pair<std::string, std::string>>& ups,
                                 int n) {
    std::set<Word> out;
    for (const auto& [pre, per] : ups) {
        Word u = a.parse_word(pre), v = a.parse_word(per);
        Word expanded = u;
        while (expanded.size() < u.size() + v.size() * (static_cast<std::size_t>(n) + 2) + static_cast<std::size_t>(n))
            expanded.insert(expanded.end(), v.begin(), v.end());
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= expanded.size(); ++i)
            out.insert(Word(expanded.begin() + static_cast<std::ptrdiff_t>(i),
                            expanded.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(n))));
    }
    return out;
}

/// Deterministic small-SFT generator for property tests.
inline std::set<Word> random_allowed_set(std::mt19937_64& rng, int alphabet_size, int order) {
    std::set<Word> out;
    std::uint64_t total = 1;
    for (int i = 0; i < order; ++i) total *= static_cast<std::uint64_t>(alphabet_size);
    for (std::uint64_t v = 0; v < total; ++v) {
        if (rng() % 100 < 60) out.insert(tracecast::decode_word(v, order, alphabet_size));
    }
    return out;
}

}  // namespace support

#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/sft.hpp"
#include "tracecast/sofic.hpp"

namespace tracecast {

/// A total self-map of the alphabet, the witness shape of condition T0.
struct PhiMap {
    Alphabet alph;
    std::vector<Symbol> image;  // image[a] = phi(a)

    Symbol apply(Symbol a) const { return image.at(static_cast<std::size_t>(a)); }

    std::set<Symbol> image_set() const { return std::set<Symbol>(image.begin(), image.end()); }

    bool word_in_image(const Word& w) const {
        std::set<Symbol> img = image_set();
        for (Symbol s : w)
            if (!img.count(s)) return false;
        return true;
    }

    std::string format() const {
        std::string out;
        for (Symbol a = 0; a < alph.size(); ++a) {
            if (a) out += ",";
            out += alph.name(a) + "->" + alph.name(image[static_cast<std::size_t>(a)]);
        }
        return out;
    }
};

/// The ultimately periodic orbit word (phi^j(a))_j; preperiod + period <= |A|.
inline UPWord orbit_word(const PhiMap& phi, Symbol a) {
    std::vector<Symbol> seq;
    std::vector<int> seen(static_cast<std::size_t>(phi.alph.size()), -1);
    Symbol cur = a;
    while (seen[static_cast<std::size_t>(cur)] < 0) {
        seen[static_cast<std::size_t>(cur)] = static_cast<int>(seq.size());
        seq.push_back(cur);
        cur = phi.apply(cur);
    }
    int start = seen[static_cast<std::size_t>(cur)];
    Word pre(seq.begin(), seq.begin() + start);
    Word per(seq.begin() + start, seq.end());
    return UPWord(std::move(pre), std::move(per));
}

/// Whether every phi-orbit lies in the subshift.
inline bool valid_t0_map(const SoficGraph& s, const PhiMap& phi) {
    for (Symbol a = 0; a < phi.alph.size(); ++a)
        if (!s.member_up(orbit_word(phi, a))) return false;
    return true;
}

/// Exhaustive T0 search over all |A|^|A| maps in lexicographic order of the
/// image vector; the first valid map is returned. Letters absent from the
/// subshift are rejected up front.
inline std::optional<PhiMap> check_t0(const SoficGraph& s) {
    const Alphabet& alph = s.alphabet();
    std::set<Symbol> used = s.letters_used();
    for (Symbol a = 0; a < alph.size(); ++a)
        if (!used.count(a))
            throw AlphabetMismatchError("check_t0: letter '" + alph.name(a) +
                                        "' does not occur in the subshift");
    std::vector<Symbol> img(static_cast<std::size_t>(alph.size()), 0);
    for (;;) {
        PhiMap phi{alph, img};
        if (valid_t0_map(s, phi)) return phi;
        int i = alph.size() - 1;
        while (i >= 0 && img[static_cast<std::size_t>(i)] == alph.size() - 1) {
            img[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) return std::nullopt;
        ++img[static_cast<std::size_t>(i)];
    }
}

/// T3 witness: a T0 map together with a word leaving its image whose periodic
/// repetition stays in the subshift.
struct T3Witness {
    PhiMap phi;
    Word w;
};

struct T3Result {
    enum class Status { Found, NotFoundUpToBound, NotT0 };
    Status status = Status::NotT0;
    std::optional<T3Witness> witness;
    int bound = 0;
};

/// Bounded T3 search: for every valid T0 map (lexicographic order), search
/// words of length 1..max_w_len with a letter outside phi(A) and w^omega in
/// the subshift. Absence is only a bounded verdict.
inline T3Result check_t3(const SoficGraph& s, int max_w_len) {
    if (max_w_len < 1) throw Error("check_t3: bound must be >= 1");
    const Alphabet& alph = s.alphabet();
    T3Result res;
    res.bound = max_w_len;
    bool any_t0 = false;
    std::vector<Symbol> img(static_cast<std::size_t>(alph.size()), 0);
    for (;;) {
        PhiMap phi{alph, img};
        if (valid_t0_map(s, phi)) {
            any_t0 = true;
            for (int len = 1; len <= max_w_len; ++len) {
                std::uint64_t total = 1;
                for (int i = 0; i < len; ++i) total *= static_cast<std::uint64_t>(alph.size());
                for (std::uint64_t v = 0; v < total; ++v) {
                    Word w = decode_word(v, len, alph.size());
                    if (phi.word_in_image(w)) continue;
                    if (s.member_up(UPWord({}, w))) {
                        res.status = T3Result::Status::Found;
                        res.witness = T3Witness{phi, w};
                        return res;
                    }
                }
            }
        }
        int i = alph.size() - 1;
        while (i >= 0 && img[static_cast<std::size_t>(i)] == alph.size() - 1) {
            img[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++img[static_cast<std::size_t>(i)];
    }
    res.status = any_t0 ? T3Result::Status::NotFoundUpToBound : T3Result::Status::NotT0;
    return res;
}

/// Default T3 search bound: any w with w^omega in the subshift pumps down
/// below a presentation-dependent bound.
inline int default_t3_bound(const SoficGraph& s) {
    return std::max(1, 2 * canonical_dfa(s).num_states);
}

/// T2: the canonical DFA has a strongly connected component containing a
/// vertex with two distinct out-edges inside the component. Such a component
/// presents an infinite transitive subshift inside the given one; it is
/// returned as the witness. Sound but possibly incomplete for the abstract
/// definition, which quantifies over arbitrary included subshifts.
inline std::optional<SoficGraph> check_t2(const SoficGraph& s) {
    if (s.is_empty_subshift()) return std::nullopt;
    CanonicalDfa dfa = canonical_dfa(s);
    std::vector<Edge> edges = dfa_edges(dfa);
    int num_sccs = 0;
    std::vector<int> comp = detail::scc_ids(dfa.num_states, edges, num_sccs);
    for (int c = 0; c < num_sccs; ++c) {
        std::vector<int> fanout(static_cast<std::size_t>(dfa.num_states), 0);
        bool diamond = false;
        for (const Edge& e : edges)
            if (comp[static_cast<std::size_t>(e.from)] == c && comp[static_cast<std::size_t>(e.to)] == c)
                if (++fanout[static_cast<std::size_t>(e.from)] >= 2) diamond = true;
        if (!diamond) continue;
        SoficGraph witness = detail::scc_subgraph(dfa, edges, comp, c);
        if (!witness.is_empty_subshift()) return witness;
    }
    return std::nullopt;
}

/// A block alphabet whose full shift embeds in a given subshift.
struct BlockChoice {
    BlockAlphabet blocks;
    Word u, v;  // the two base words, |u| = |v|
    int l = 0;  // blocks are {u,v}^l
};

/// Builds B subset A^(n'*l) with |B| >= n and B^omega inside the subshift:
/// pick a branching state q of a strongly connected deterministic
/// presentation, take return words for both branches, then power up.
inline BlockChoice choose_blocks(const SoficGraph& s, int n) {
    if (n < 2) throw Error("choose_blocks: n must be >= 2");
    if (!is_transitive(s) || !is_infinite(s))
        throw Error("choose_blocks: subshift must be transitive and infinite");

    // A strongly connected deterministic presentation: the SCC of the
    // canonical DFA generating the whole language.
    CanonicalDfa dfa = canonical_dfa(s);
    std::vector<Edge> edges = dfa_edges(dfa);
    int num_sccs = 0;
    std::vector<int> comp = detail::scc_ids(dfa.num_states, edges, num_sccs);
    int chosen = -1;
    for (int c = 0; c < num_sccs && chosen < 0; ++c) {
        SoficGraph sub = detail::scc_subgraph(dfa, edges, comp, c);
        if (!sub.is_empty_subshift() && canonical_dfa(sub) == dfa) chosen = c;
    }
    if (chosen < 0) throw Error("choose_blocks: no generating component (not transitive?)");
    auto in_scc = [&](int v) { return comp[static_cast<std::size_t>(v)] == chosen; };
    auto scc_next = [&](int v, Symbol a) {
        int t = dfa.next(v, a);
        return (t >= 0 && in_scc(t)) ? t : -1;
    };

    // Branching state with two letters defined inside the component.
    int q = -1;
    Symbol la = -1, lb = -1;
    for (int v = 0; v < dfa.num_states && q < 0; ++v) {
        if (!in_scc(v)) continue;
        std::vector<Symbol> outs;
        for (Symbol a = 0; a < dfa.alph.size(); ++a)
            if (scc_next(v, a) >= 0) outs.push_back(a);
        if (outs.size() >= 2) {
            q = v;
            la = outs[0];
            lb = outs[1];
        }
    }
    if (q < 0) throw Error("choose_blocks: no branching state (subshift not infinite?)");

    // Shortest return word from a state back to q, inside the component.
    auto return_word = [&](int from) {
        std::deque<int> bfs{from};
        std::vector<int> prev_state(static_cast<std::size_t>(dfa.num_states), -2);
        std::vector<Symbol> prev_sym(static_cast<std::size_t>(dfa.num_states), -1);
        prev_state[static_cast<std::size_t>(from)] = -1;
        if (from == q) return Word{};
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (Symbol a = 0; a < dfa.alph.size(); ++a) {
                int t = scc_next(v, a);
                if (t < 0 || prev_state[static_cast<std::size_t>(t)] != -2) continue;
                prev_state[static_cast<std::size_t>(t)] = v;
                prev_sym[static_cast<std::size_t>(t)] = a;
                if (t == q) {
                    Word w;
                    for (int x = t; prev_state[static_cast<std::size_t>(x)] >= 0;
                         x = prev_state[static_cast<std::size_t>(x)])
                        w.push_back(prev_sym[static_cast<std::size_t>(x)]);
                    std::reverse(w.begin(), w.end());
                    return w;
                }
                bfs.push_back(t);
            }
        }
        throw Error("choose_blocks: no return path (component not strongly connected?)");
    };
    Word au = concat({la}, return_word(scc_next(q, la)));
    Word bv = concat({lb}, return_word(scc_next(q, lb)));

    Word u, v;
    for (std::size_t i = 0; i < bv.size(); ++i) u.insert(u.end(), au.begin(), au.end());
    for (std::size_t i = 0; i < au.size(); ++i) v.insert(v.end(), bv.begin(), bv.end());
    int l = 0;
    for (std::uint64_t p = 1; p < static_cast<std::uint64_t>(n); p <<= 1) ++l;
    l = std::max(l, 1);

    std::set<Word> block_set;
    for (std::uint64_t mask = 0; mask < (1ull << l); ++mask) {
        Word b;
        for (int i = l - 1; i >= 0; --i) {
            const Word& part = ((mask >> i) & 1) ? v : u;
            b.insert(b.end(), part.begin(), part.end());
        }
        block_set.insert(b);
    }
    BlockAlphabet blocks(s.alphabet(), static_cast<int>(u.size()) * l,
                         std::vector<Word>(block_set.begin(), block_set.end()));

    // Sanity: every pairwise concatenation stays in the language (B^* labels
    // return paths by construction; this is the executable check).
    for (const Word& b1 : blocks.blocks)
        for (const Word& b2 : blocks.blocks)
            if (!s.contains_word(concat(b1, b2)))
                throw Error("choose_blocks: block concatenation left the language");
    return BlockChoice{std::move(blocks), std::move(u), std::move(v), l};
}

}  // namespace tracecast

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/sofic.hpp"

namespace tracecast {

/// Shift of finite type of order k, stored by its allowed words of length k
/// (the forbidden set is the complement within A^k).
struct Sft {
    Alphabet alph;
    int order = 1;
    std::set<Word> allowed;

    Sft() = default;
    Sft(Alphabet a, int k, std::set<Word> allow) : alph(std::move(a)), order(k), allowed(std::move(allow)) {
        if (order < 1) throw Error("SFT order must be >= 1");
        for (const Word& w : allowed) {
            if (static_cast<int>(w.size()) != order) throw Error("allowed word of wrong length");
            for (Symbol s : w)
                if (s < 0 || s >= alph.size()) throw Error("allowed word uses unknown symbol");
        }
    }

    static Sft from_forbidden(Alphabet a, int k, const std::set<Word>& forbidden) {
        std::set<Word> allow;
        const std::uint64_t total = [&] {
            std::uint64_t t = 1;
            for (int i = 0; i < k; ++i) t *= static_cast<std::uint64_t>(a.size());
            return t;
        }();
        for (std::uint64_t v = 0; v < total; ++v) {
            Word w = decode_word(v, k, a.size());
            if (!forbidden.count(w)) allow.insert(w);
        }
        return Sft(std::move(a), k, std::move(allow));
    }

    std::set<Word> forbidden() const {
        std::set<Word> out;
        std::uint64_t total = 1;
        for (int i = 0; i < order; ++i) total *= static_cast<std::uint64_t>(alph.size());
        for (std::uint64_t v = 0; v < total; ++v) {
            Word w = decode_word(v, order, alph.size());
            if (!allowed.count(w)) out.insert(w);
        }
        return out;
    }
};

/// De Bruijn presentation: for k >= 2 vertices are the (k-1)-windows, an
/// allowed word w contributes the edge w[0..k-1) -> w[1..k) labeled w[k-1].
/// The SoficGraph constructor trims it essential, so the factor language is
/// the bi-extendable one.
inline SoficGraph sft_to_graph(const Sft& s) {
    if (s.allowed.empty()) return SoficGraph::empty_subshift(s.alph);
    if (s.order == 1) {
        std::vector<Edge> edges;
        for (const Word& w : s.allowed) edges.push_back({0, w[0], 0});
        return SoficGraph(s.alph, 1, std::move(edges));
    }
    std::map<Word, int> vertex;
    auto vid = [&](const Word& w) {
        auto [it, fresh] = vertex.emplace(w, static_cast<int>(vertex.size()));
        (void)fresh;
        return it->second;
    };
    std::vector<Edge> edges;
    for (const Word& w : s.allowed) {
        int from = vid(subword(w, 0, static_cast<std::size_t>(s.order - 1)));
        int to = vid(subword(w, 1, static_cast<std::size_t>(s.order - 1)));
        edges.push_back({from, w[static_cast<std::size_t>(s.order - 1)], to});
    }
    std::vector<std::string> names(vertex.size());
    for (const auto& [w, id] : vertex) names[static_cast<std::size_t>(id)] = s.alph.format(w);
    return SoficGraph(s.alph, static_cast<int>(vertex.size()), std::move(edges), std::move(names));
}

/// Restricts the allowed set to words on bi-infinite valid paths.
inline Sft essential_sft(const Sft& s) {
    std::set<Word> keep = s.allowed;
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<Word> next;
        for (const Word& w : keep) {
            bool has_succ = false, has_pred = false;
            if (s.order == 1) {
                has_succ = has_pred = true;
            } else {
                for (const Word& v : keep) {
                    if (!has_succ && std::equal(w.begin() + 1, w.end(), v.begin())) has_succ = true;
                    if (!has_pred && std::equal(v.begin() + 1, v.end(), w.begin())) has_pred = true;
                    if (has_succ && has_pred) break;
                }
            }
            if (has_succ && has_pred)
                next.insert(w);
            else
                changed = true;
        }
        keep.swap(next);
    }
    return Sft(s.alph, s.order, std::move(keep));
}

inline std::set<Word> factors(const Sft& s, int n) { return sft_to_graph(s).factors(n); }
inline std::set<Word> factors(const SoficGraph& g, int n) { return g.factors(n); }

/// An alphabet B of distinct k-blocks over a base alphabet.
struct BlockAlphabet {
    Alphabet base;
    int k = 1;
    std::vector<Word> blocks;

    BlockAlphabet() = default;
    BlockAlphabet(Alphabet base_alph, int block_len, std::vector<Word> blocks_in)
        : base(std::move(base_alph)), k(block_len), blocks(std::move(blocks_in)) {
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (static_cast<int>(blocks[i].size()) != k) throw Error("block of wrong length");
            if (!index_.emplace(blocks[i], static_cast<Symbol>(i)).second) throw Error("duplicate block");
        }
    }

    /// All |A|^k blocks, in lexicographic order.
    static BlockAlphabet full(Alphabet base_alph, int block_len) {
        std::vector<Word> blocks;
        std::uint64_t total = 1;
        for (int i = 0; i < block_len; ++i) total *= static_cast<std::uint64_t>(base_alph.size());
        for (std::uint64_t v = 0; v < total; ++v) blocks.push_back(decode_word(v, block_len, base_alph.size()));
        return BlockAlphabet(std::move(base_alph), block_len, std::move(blocks));
    }

    int size() const { return static_cast<int>(blocks.size()); }
    const Word& block(Symbol s) const { return blocks.at(static_cast<std::size_t>(s)); }

    std::optional<Symbol> find_block(const Word& w) const {
        auto it = index_.find(w);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// The blocks as an Alphabet of their own (symbol names spell the blocks).
    Alphabet as_alphabet() const {
        std::vector<std::string> names;
        names.reserve(blocks.size());
        for (const Word& b : blocks) names.push_back(base.format(b));
        return Alphabet(std::move(names));
    }

private:
    std::map<Word, Symbol> index_;
};

struct HigherBlock {
    Sft sft2;              // order-2 SFT over the block symbols
    BlockAlphabet blocks;  // blocks = the allowed words of the input
};

/// Higher-block recoding of an order-k SFT: blocks are the allowed k-words,
/// pairs are the overlapping ones. The result presents
/// { (z[j..j+k-1])_j : z in the subshift }.
inline HigherBlock higher_block(const Sft& input) {
    Sft s = essential_sft(input);
    if (s.allowed.empty()) throw Error("higher_block: empty subshift");
    BlockAlphabet ba(s.alph, s.order, std::vector<Word>(s.allowed.begin(), s.allowed.end()));
    std::set<Word> pairs;
    for (Symbol i = 0; i < ba.size(); ++i) {
        const Word& u = ba.block(i);
        for (Symbol j = 0; j < ba.size(); ++j) {
            const Word& v = ba.block(j);
            if (s.order == 1 || std::equal(u.begin() + 1, u.end(), v.begin())) pairs.insert({i, j});
        }
    }
    Sft sft2(ba.as_alphabet(), 2, std::move(pairs));
    return HigherBlock{std::move(sft2), std::move(ba)};
}

/// q-th projection of a subshift over block symbols: relabel each block symbol
/// by its q-th base letter and trim.
inline SoficGraph project(const SoficGraph& g, const BlockAlphabet& ba, int q) {
    if (q < 0 || q >= ba.k) throw Error("project: column index out of range");
    if (g.is_empty_subshift()) return SoficGraph::empty_subshift(ba.base);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        edges.push_back({e.from, ba.block(e.sym)[static_cast<std::size_t>(q)], e.to});
    return SoficGraph(ba.base, g.num_vertices(), std::move(edges));
}

inline SoficGraph project(const Sft& s, const BlockAlphabet& ba, int q) {
    return project(sft_to_graph(s), ba, q);
}

/// Union of all column projections.
inline SoficGraph project_all(const SoficGraph& g, const BlockAlphabet& ba) {
    std::vector<SoficGraph> parts;
    for (int q = 0; q < ba.k; ++q) parts.push_back(project(g, ba, q));
    return union_graphs(parts, ba.base);
}

inline SoficGraph project_all(const Sft& s, const BlockAlphabet& ba) {
    return project_all(sft_to_graph(s), ba);
}

/// An r-block map between symbol alphabets: reads r+1 consecutive source
/// symbols, emits one target symbol.
struct BlockMap {
    Alphabet source;
    Alphabet target;
    int radius = 0;
    std::map<Word, Symbol> table;  // keys of length radius+1 over source

    Symbol apply(const Word& key) const {
        auto it = table.find(key);
        if (it == table.end())
            throw Error("block map undefined on " + source.format(key) +
                        " (radius exceeding available context)");
        return it->second;
    }

    static BlockMap radius0(Alphabet source, Alphabet target, const std::vector<Symbol>& image) {
        BlockMap m{std::move(source), std::move(target), 0, {}};
        for (std::size_t i = 0; i < image.size(); ++i) m.table[{static_cast<Symbol>(i)}] = image[i];
        return m;
    }
};

/// Result of interleaving a factor map with its domain SFT: the conjugate SFT
/// whose symbols are (target letter, source symbol) pairs, with the target
/// track carrying the image. When the source symbols are A-blocks and the
/// target is A itself, the pairs are A-blocks of length 1+k and `as_blocks`
/// carries that structure.
struct Interleaved {
    Sft sft;
    std::vector<std::pair<Symbol, Symbol>> pair_symbols;  // (target, source) per new symbol
    std::optional<BlockAlphabet> as_blocks;
};

inline Interleaved interleave_conjugate(const Sft& g, const BlockMap& phi,
                                        const std::optional<BlockAlphabet>& source_blocks = std::nullopt) {
    if (phi.source != g.alph) throw AlphabetMismatchError("interleave: map source mismatch");
    const int order = std::max(g.order, phi.radius + 1);

    // Allowed pair-words come from source factors of length order + radius:
    // there every window position has full map context. Position 0 of each
    // window pins the target track, so the SFT closure is exactly the set of
    // interleaved (phi(w), w) sequences.
    std::map<std::pair<Symbol, Symbol>, Symbol> pair_id;
    std::vector<std::pair<Symbol, Symbol>> pair_symbols;
    std::set<std::vector<std::pair<Symbol, Symbol>>> allowed_pairs;
    {
        SoficGraph graph = sft_to_graph(g);
        for (const Word& w : graph.factors(order + phi.radius)) {
            std::vector<std::pair<Symbol, Symbol>> pw;
            for (int j = 0; j < order; ++j) {
                Word key = subword(w, static_cast<std::size_t>(j), static_cast<std::size_t>(phi.radius + 1));
                pw.emplace_back(phi.apply(key), w[static_cast<std::size_t>(j)]);
            }
            allowed_pairs.insert(pw);
        }
    }
    if (allowed_pairs.empty()) throw Error("interleave: empty subshift");
    for (const auto& pw : allowed_pairs)
        for (const auto& p : pw)
            if (!pair_id.count(p)) {
                pair_id.emplace(p, static_cast<Symbol>(pair_symbols.size()));
                pair_symbols.push_back(p);
            }

    // Name pair symbols; build the block structure when both sides live over
    // the same base alphabet.
    std::optional<BlockAlphabet> as_blocks;
    std::vector<std::string> names;
    if (source_blocks && source_blocks->base == phi.target) {
        std::vector<Word> blocks;
        for (const auto& [a, b] : pair_symbols) {
            Word blk{a};
            const Word& src = source_blocks->block(b);
            blk.insert(blk.end(), src.begin(), src.end());
            blocks.push_back(blk);
            names.push_back(phi.target.format(blk));
        }
        as_blocks = BlockAlphabet(phi.target, 1 + source_blocks->k, std::move(blocks));
    } else {
        for (const auto& [a, b] : pair_symbols)
            names.push_back(phi.target.name(a) + "|" + phi.source.name(b));
    }

    std::set<Word> allowed;
    for (const auto& pw : allowed_pairs) {
        Word w;
        for (const auto& p : pw) w.push_back(pair_id.at(p));
        allowed.insert(w);
    }
    Sft sft(Alphabet(std::move(names)), order, std::move(allowed));
    return Interleaved{std::move(sft), std::move(pair_symbols), std::move(as_blocks)};
}

}  // namespace tracecast

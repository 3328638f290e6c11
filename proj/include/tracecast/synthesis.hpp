#pragma once

#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/ca.hpp"
#include "tracecast/sft.hpp"
#include "tracecast/sofic.hpp"
#include "tracecast/tracecheck.hpp"

namespace tracecast {

struct TracerRule {
    LocalRule rule;               // anchor 0, diameter 2
    std::vector<Symbol> phi;      // successor map used by the default branch
};

/// The order-2 SFT tracer: f(x0,x1) = x1 when x0x1 is allowed,
/// otherwise the least allowed successor of x0. The trace subshift of the
/// result is the input SFT.
inline TracerRule trace_2sft(const Sft& g2) {
    if (g2.order != 2) throw Error("trace_2sft: order-2 SFT required");
    const int asz = g2.alph.size();
    std::vector<Symbol> phi(static_cast<std::size_t>(asz), -1);
    for (Symbol a = 0; a < asz; ++a) {
        for (Symbol b = 0; b < asz; ++b)
            if (g2.allowed.count({a, b})) {
                phi[static_cast<std::size_t>(a)] = b;
                break;
            }
        if (phi[static_cast<std::size_t>(a)] < 0)
            throw Error("trace_2sft: letter '" + g2.alph.name(a) + "' has no allowed successor");
    }
    std::vector<Symbol> table(static_cast<std::size_t>(asz) * static_cast<std::size_t>(asz));
    for (Symbol a = 0; a < asz; ++a)
        for (Symbol b = 0; b < asz; ++b)
            table[static_cast<std::size_t>(a) * static_cast<std::size_t>(asz) + static_cast<std::size_t>(b)] =
                g2.allowed.count({a, b}) ? b : phi[static_cast<std::size_t>(a)];
    return TracerRule{LocalRule::dense(g2.alph, 0, 2, std::move(table)), std::move(phi)};
}

/// The clock injection H(h) = gamma^h(u) gamma^h(uv) for a pair of
/// blocks rotated so they differ at position 0. Injectivity and the column
/// property (every column of the clock orbit is a rotation power of u^w or
/// (uv)^w) are verified exhaustively at construction.
struct ClockCode {
    int n = 0;
    Word u, v;        // original blocks
    int rotation = 0; // applied so the copies differ at position 0
    Word u_rot, v_rot;
    std::vector<Word> H;  // 2n words of length 3n

    const Word& at(int h) const { return H.at(static_cast<std::size_t>(h)); }
    int index_of(const Word& w) const {
        for (std::size_t i = 0; i < H.size(); ++i)
            if (H[i] == w) return static_cast<int>(i);
        return -1;
    }
};

inline ClockCode make_clock(const BlockAlphabet& B) {
    if (B.size() < 2) throw Error("clock: needs at least two blocks");
    const int n = B.k;
    std::vector<Word> sorted = B.blocks;
    std::sort(sorted.begin(), sorted.end());
    ClockCode c;
    c.n = n;
    c.u = sorted[0];
    c.v = sorted[1];
    int p = 0;
    while (c.u[static_cast<std::size_t>(p)] == c.v[static_cast<std::size_t>(p)]) ++p;
    c.rotation = p;
    c.u_rot = rotated_by(c.u, p);
    c.v_rot = rotated_by(c.v, p);
    Word uv = concat(c.u_rot, c.v_rot);
    for (int h = 0; h < 2 * n; ++h) c.H.push_back(concat(rotated_by(c.u_rot, h), rotated_by(uv, h)));

    std::set<Word> distinct(c.H.begin(), c.H.end());
    if (static_cast<int>(distinct.size()) != 2 * n) throw Error("clock: injection failure");

    // Column property over one full period of the orbit.
    std::set<UPWord> expected;
    for (int s = 0; s < n; ++s) expected.insert(UPWord({}, rotated_by(c.u_rot, s)));
    for (int s = 0; s < 2 * n; ++s) expected.insert(UPWord({}, rotated_by(uv, s)));
    for (int q = 0; q < 2 * n; ++q) {
        for (int col = 0; col < 3 * n; ++col) {
            Word column;
            for (int j = 0; j < 2 * n; ++j)
                column.push_back(c.H[static_cast<std::size_t>((q + j) % (2 * n))][static_cast<std::size_t>(col)]);
            if (!expected.count(UPWord({}, column))) throw Error("clock: column property failure");
        }
    }
    return c;
}

/// The staggered-encoding system: the SFT Psi on alphabet A^{4n} whose first n
/// columns carry staggered B^w encodings and whose last 3n columns carry the
/// clock, together with the sliding decoder onto B sequences.
struct PsiSystem {
    BlockAlphabet B;
    ClockCode clock;
    int n = 0;
    BlockAlphabet psi_blocks;  // active A^{4n} symbols
    Sft psi;                   // over psi_blocks.as_alphabet(), order max(n,2)
    BlockMap decoder;          // psi symbols -> B symbols, radius n-1
    std::set<Word> n_windows;  // length-n factors over psi symbols

    bool window_member(const Word& symbols) const {
        return static_cast<int>(symbols.size()) == n ? n_windows.count(symbols) > 0 : false;
    }

    /// Time-q encoding of a periodic block sequence, as psi symbol indices.
    std::vector<Symbol> time_q_encoding(const std::vector<Symbol>& y, int q, int length) const {
        std::vector<Symbol> out;
        const int P = static_cast<int>(y.size());
        auto block_at = [&](long long j) -> const Word& {
            long long idx = ((j % P) + P) % P;
            return B.block(y[static_cast<std::size_t>(idx)]);
        };
        for (int j = 0; j < length; ++j) {
            Word sym;
            for (int p = 0; p < n; ++p) {
                long long start = j - (((j - p + q) % n + n) % n);
                sym.push_back(block_at(start)[static_cast<std::size_t>(j - start)]);
            }
            const Word& clk = clock.at((q + j) % (2 * n));
            sym.insert(sym.end(), clk.begin(), clk.end());
            auto id = psi_blocks.find_block(sym);
            if (!id) throw Error("time_q_encoding: produced an inactive symbol");
            out.push_back(*id);
        }
        return out;
    }
};

namespace detail {

/// Whether a word is a length-|x| prefix of sigma^s(B^w): split at block
/// boundaries; each segment must match the corresponding slice of some block.
inline bool shifted_block_prefix_ok(const BlockAlphabet& B, int s, const Word& x) {
    const int n = B.k;
    int t = 0;
    while (t < static_cast<int>(x.size())) {
        int offset = (s + t) % n;
        int seg = std::min(n - offset, static_cast<int>(x.size()) - t);
        bool any = false;
        for (const Word& b : B.blocks) {
            bool match = true;
            for (int i = 0; i < seg && match; ++i)
                match = b[static_cast<std::size_t>(offset + i)] == x[static_cast<std::size_t>(t + i)];
            if (match) {
                any = true;
                break;
            }
        }
        if (!any) return false;
        t += seg;
    }
    return true;
}

}  // namespace detail

inline PsiSystem multi(const BlockAlphabet& B) {
    if (B.size() < 2) throw Error("multi: needs at least two blocks");
    PsiSystem sys;
    sys.B = B;
    sys.clock = make_clock(B);
    const int n = B.k;
    sys.n = n;
    const Alphabet& A = B.base;
    const int order = std::max(n, 2);

    // Active symbols: any w-row with any clock row.
    std::vector<Word> symbols;
    const std::uint64_t rows = pow_u64(static_cast<std::uint64_t>(A.size()), n);
    for (std::uint64_t r = 0; r < rows; ++r) {
        Word wrow = decode_word(r, n, A.size());
        for (int q = 0; q < 2 * n; ++q) symbols.push_back(concat(wrow, sys.clock.at(q)));
    }
    std::sort(symbols.begin(), symbols.end());
    sys.psi_blocks = BlockAlphabet(A, 4 * n, std::move(symbols));
    Alphabet psi_alph = sys.psi_blocks.as_alphabet();

    // Allowed `order`-windows: a consecutive clock run, and every column's
    // down-word a valid prefix of the appropriately shifted B^w.
    std::set<Word> allowed;
    const std::uint64_t combos = pow_u64(rows, order);
    for (int q0 = 0; q0 < 2 * n; ++q0) {
        for (std::uint64_t c = 0; c < combos; ++c) {
            std::uint64_t v = c;
            std::vector<Word> wrows(static_cast<std::size_t>(order));
            for (int j = order - 1; j >= 0; --j) {
                wrows[static_cast<std::size_t>(j)] = decode_word(v % rows, n, A.size());
                v /= rows;
            }
            bool ok = true;
            for (int p = 0; p < n && ok; ++p) {
                Word column;
                for (int j = 0; j < order; ++j) column.push_back(wrows[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)]);
                ok = detail::shifted_block_prefix_ok(B, ((q0 - p) % n + n) % n, column);
            }
            if (!ok) continue;
            Word word;
            for (int j = 0; j < order; ++j) {
                Word sym = concat(wrows[static_cast<std::size_t>(j)], sys.clock.at((q0 + j) % (2 * n)));
                word.push_back(*sys.psi_blocks.find_block(sym));
            }
            allowed.insert(word);
        }
    }
    sys.psi = Sft(psi_alph, order, std::move(allowed));

    // Sliding decoder: read n rows, take the column at block phase q mod n.
    sys.n_windows = sft_to_graph(sys.psi).factors(n);
    BlockMap dec;
    dec.source = psi_alph;
    dec.target = B.as_alphabet();
    dec.radius = n - 1;
    for (const Word& win : sys.n_windows) {
        const Word& first = sys.psi_blocks.block(win[0]);
        Word clk(first.begin() + n, first.end());
        int q = sys.clock.index_of(clk);
        if (q < 0) throw Error("multi: window with unknown clock value");
        Word block;
        for (int j = 0; j < n; ++j)
            block.push_back(sys.psi_blocks.block(win[static_cast<std::size_t>(j)])[static_cast<std::size_t>(q % n)]);
        auto b = B.find_block(block);
        if (!b) throw Error("multi: decoder produced a non-block");
        dec.table[win] = *b;
    }
    sys.decoder = std::move(dec);
    return sys;
}

/// Freezingness: no two words of W overlap when shifted by 1..k positions.
inline bool is_freezing(const std::vector<Word>& W, int k) {
    if (W.empty()) return true;
    const int h = static_cast<int>(W.front().size());
    for (const Word& w : W)
        if (static_cast<int>(w.size()) != h) throw Error("is_freezing: mixed lengths");
    for (int i = 1; i <= k; ++i) {
        if (i >= h) return false;  // adjacent placements always intersect
        for (const Word& w1 : W)
            for (const Word& w2 : W)
                if (std::equal(w1.begin() + i, w1.end(), w2.begin())) return false;
    }
    return true;
}

/// The section-5 border construction: Upsilon = { a^|w| v rev(v) a^(k+3|w|) }
/// over a in phi(A) and v a rotation of w; l = k+6|w|, h = 2k+6|w|.
struct BorderSystem {
    Alphabet alph;         // base A
    BlockAlphabet blocks;  // B
    Word w;
    PhiMap phi;
    int k = 0, wlen = 0, l = 0, h = 0;
    std::vector<Word> upsilon;                          // lex order
    std::map<Word, std::pair<Symbol, Word>> structure;  // border -> (a, v)

    bool is_block(const Symbol* p) const {
        Word b(p, p + k);
        return blocks.find_block(b).has_value();
    }
    bool is_border(const Symbol* p) const {
        Word b(p, p + l);
        return structure.count(b) > 0;
    }
    bool is_bupsilon(const Symbol* p) const { return is_block(p) && is_border(p + k); }
};

inline BorderSystem make_borders(const BlockAlphabet& B, const Word& w, const PhiMap& phi) {
    if (w.empty()) throw Error("make_borders: empty witness word");
    if (phi.alph != B.base) throw AlphabetMismatchError("make_borders: phi alphabet mismatch");
    if (phi.word_in_image(w)) throw Error("make_borders: witness word lies inside phi(A)");

    BorderSystem bs;
    bs.alph = B.base;
    bs.blocks = B;
    bs.w = w;
    bs.phi = phi;
    bs.k = B.k;
    bs.wlen = static_cast<int>(w.size());
    bs.l = bs.k + 6 * bs.wlen;
    bs.h = 2 * bs.k + 6 * bs.wlen;

    std::set<Word> rotations;
    Word v = w;
    for (int q = 0; q < bs.wlen; ++q) {
        rotations.insert(v);
        v = rotated(v);
    }
    std::set<Symbol> image = phi.image_set();
    for (Symbol a : image) {
        for (const Word& rot : rotations) {
            Word b(static_cast<std::size_t>(bs.wlen), a);
            b = concat(b, rot);
            b = concat(b, reversed(rot));
            b.insert(b.end(), static_cast<std::size_t>(bs.k + 3 * bs.wlen), a);
            bs.structure.emplace(b, std::make_pair(a, rot));
        }
    }
    for (const auto& [b, parts] : bs.structure) bs.upsilon.push_back(b);

    // Every border must carry a letter outside phi(A) in the v rev(v) zone
    // (the witness word provides one).
    for (const Word& b : bs.upsilon) {
        bool outside = false;
        for (int i = bs.wlen; i < 3 * bs.wlen && !outside; ++i)
            outside = !image.count(b[static_cast<std::size_t>(i)]);
        if (!outside) throw Error("make_borders: border word has no letter outside phi(A)");
    }
    if (!is_freezing(bs.upsilon, bs.k + 3 * bs.wlen))
        throw Error("make_borders: borders are not (k+3|w|)-freezing");
    return bs;
}

/// Border evolution Delta_Upsilon: apply phi to the padding letter and rotate
/// the witness copies. Closed on Upsilon.
inline Word border_step(const BorderSystem& bs, const Word& b) {
    auto it = bs.structure.find(b);
    if (it == bs.structure.end()) throw Error("border_step: not a border word");
    const auto& [a, v] = it->second;
    Symbol fa = bs.phi.apply(a);
    Word rv = rotated(v);
    Word out(static_cast<std::size_t>(bs.wlen), fa);
    out = concat(out, rv);
    out = concat(out, reversed(rv));
    out.insert(out.end(), static_cast<std::size_t>(bs.k + 3 * bs.wlen), fa);
    if (!bs.structure.count(out)) throw Error("border_step: left Upsilon");
    return out;
}

/// Theta membership for a 2h-window: a macrocell at the origin and no
/// overlapping macrocell within h-1 positions.
inline bool theta_member(const BorderSystem& bs, const Word& u) {
    if (static_cast<int>(u.size()) != 2 * bs.h) throw Error("theta_member: window must have length 2h");
    if (!bs.is_bupsilon(u.data())) return false;
    for (int i = 1; i < bs.h; ++i)
        if (bs.is_bupsilon(u.data() + i)) return false;
    return true;
}

/// Macroevolution on a Theta-window: simulate g against the neighbor block
/// when the second half is a macrocell, otherwise run the neighbor-free step
/// g(b,b); the border always advances by Delta_Upsilon. The neighbor test is
/// on the visible half-window (the diameter 3h-1 rule cannot see the
/// neighbor's own overlap zone, and macrocell stability only needs the
/// macrocell shape there).
inline Word macro_delta(const BorderSystem& bs, const LocalRule& g, const Word& u) {
    if (static_cast<int>(u.size()) != 2 * bs.h) throw Error("macro_delta: window must have length 2h");
    if (!theta_member(bs, u)) throw Error("macro_delta: window not in Theta");
    Symbol b0 = *bs.blocks.find_block(subword(u, 0, static_cast<std::size_t>(bs.k)));
    Symbol b1 = b0;
    if (bs.is_bupsilon(u.data() + bs.h))
        b1 = *bs.blocks.find_block(subword(u, static_cast<std::size_t>(bs.h), static_cast<std::size_t>(bs.k)));
    Word pair{b0, b1};
    Symbol out_block = g.eval(pair);
    Word out = bs.blocks.block(out_block);
    out = concat(out, border_step(bs, subword(u, static_cast<std::size_t>(bs.k),
                                              static_cast<std::size_t>(bs.l))));
    return out;
}

namespace detail {

/// Backend of the synthesized rule: anchor h-1, diameter 3h-1. A window
/// evaluates by the unique Theta-occurrence covering its cell (uniqueness from
/// (h-1)-freezingness of Theta), else by the pointwise default phi on the
/// cell's own state.
class SynthBackend : public RuleBackend {
public:
    SynthBackend(BorderSystem bs, LocalRule g) : bs_(std::move(bs)), g_(std::move(g)) {}

    const BorderSystem& borders() const { return bs_; }
    const LocalRule& inner() const { return g_; }

    Symbol eval(const Symbol* window) const override {
        const int h = bs_.h, m = h - 1;
        for (int i = 0; i < h; ++i) {
            const Symbol* u = window + (m - i);
            if (!theta_at(u)) continue;
            Word uw(u, u + 2 * h);
            return macro_delta(bs_, g_, uw)[static_cast<std::size_t>(i)];
        }
        return bs_.phi.apply(window[m]);
    }

    bool step_circular(const Word& cells, int /*anchor*/, int /*diameter*/, Word& out) const override {
        const int L = static_cast<int>(cells.size());
        const int h = bs_.h;
        // Unrolled buffer long enough for any 2h-window.
        Word buf = cells;
        while (static_cast<int>(buf.size()) < L + 2 * h) buf.insert(buf.end(), cells.begin(), cells.end());

        std::vector<bool> occ(static_cast<std::size_t>(L));
        for (int p = 0; p < L; ++p) occ[static_cast<std::size_t>(p)] = bs_.is_bupsilon(buf.data() + p);
        std::vector<bool> theta(static_cast<std::size_t>(L));
        for (int p = 0; p < L; ++p) {
            bool t = occ[static_cast<std::size_t>(p)];
            for (int i = 1; i < h && t; ++i)
                if (occ[static_cast<std::size_t>((p + i) % L)]) t = false;
            theta[static_cast<std::size_t>(p)] = t;
        }
        std::vector<bool> covered(static_cast<std::size_t>(L), false);
        out.assign(static_cast<std::size_t>(L), -1);
        for (int p = 0; p < L; ++p) {
            if (!theta[static_cast<std::size_t>(p)]) continue;
            Word u(buf.begin() + p, buf.begin() + p + 2 * h);
            Word delta = macro_delta(bs_, g_, u);
            for (int i = 0; i < h; ++i) {
                int c = (p + i) % L;
                // (h-1)-freezingness of Theta makes the covering occurrence unique
                assert(!covered[static_cast<std::size_t>(c)]);
                out[static_cast<std::size_t>(c)] = delta[static_cast<std::size_t>(i)];
                covered[static_cast<std::size_t>(c)] = true;
            }
        }
        for (int c = 0; c < L; ++c)
            if (!covered[static_cast<std::size_t>(c)])
                out[static_cast<std::size_t>(c)] = bs_.phi.apply(cells[static_cast<std::size_t>(c)]);
        return true;
    }

private:
    bool theta_at(const Symbol* u) const {
        if (!bs_.is_bupsilon(u)) return false;
        for (int i = 1; i < bs_.h; ++i)
            if (bs_.is_bupsilon(u + i)) return false;
        return true;
    }

    BorderSystem bs_;
    LocalRule g_;
};

}  // namespace detail

/// The synthesized rule on A with anchor m = h-1 and diameter d = 3h-1.
inline LocalRule full_rule(const BorderSystem& bs, const LocalRule& g) {
    if (g.anchor() != 0 || g.diameter() != 2) throw Error("full_rule: inner rule must be onesided diameter 2");
    auto be = std::make_shared<detail::SynthBackend>(bs, g);
    return LocalRule(bs.alph, bs.h - 1, 3 * bs.h - 1, std::move(be));
}

/// Valid macrocell encoding of a periodic block sequence: block then border,
/// using the least border word for every macrocell.
inline PeriodicConfig encode_blocks(const BorderSystem& bs, const std::vector<Symbol>& y, int phase = 0) {
    if (y.empty()) throw Error("encode_blocks: empty block sequence");
    Word cells;
    for (Symbol b : y) {
        const Word& blk = bs.blocks.block(b);
        cells.insert(cells.end(), blk.begin(), blk.end());
        const Word& border = bs.upsilon.front();
        cells.insert(cells.end(), border.begin(), border.end());
    }
    return PeriodicConfig(std::move(cells), phase);
}

struct T1WitnessCheck {
    bool pi0_equal = false;
    bool pi_all_equal = false;
};

/// Checks pi_0(Gamma) = pi(Gamma) = Sigma for a 2-SFT over A^k blocks.
inline T1WitnessCheck verify_t1_witness(const SoficGraph& sigma, const Sft& gamma2,
                                        const BlockAlphabet& blocks) {
    SoficGraph g = sft_to_graph(gamma2);
    T1WitnessCheck out;
    out.pi0_equal = equal(project(g, blocks, 0), sigma);
    out.pi_all_equal = equal(project_all(g, blocks), sigma);
    return out;
}

/// Everything the section-5 construction produces.
struct SynthesisResult {
    SoficGraph sigma;
    Sft gamma2;                // essential T1 witness
    BlockAlphabet gamma_blocks;
    T3Witness t3;
    TracerRule inner;          // g on the block symbols
    BorderSystem borders;
    LocalRule rule;            // on A, anchor h-1, diameter 3h-1

    PeriodicConfig encode(const std::vector<Symbol>& y, int phase = 0) const {
        return encode_blocks(borders, y, phase);
    }
};

/// Verifies the witnesses and assembles the full construction.
inline SynthesisResult synthesize(const SoficGraph& sigma, const Sft& gamma2_in,
                                  const BlockAlphabet& gamma_blocks_in, const T3Witness& t3) {
    if (gamma_blocks_in.base != sigma.alphabet())
        throw AlphabetMismatchError("synthesize: block alphabet base mismatch");

    // Essentialize the witness; drop blocks that lost all pairs.
    Sft ess = essential_sft(gamma2_in);
    if (ess.allowed.empty()) throw Error("synthesize: t1 witness is empty");
    std::set<Symbol> used;
    for (const Word& p : ess.allowed)
        for (Symbol s : p) used.insert(s);
    std::vector<Word> blocks;
    std::vector<Symbol> remap(static_cast<std::size_t>(gamma_blocks_in.size()), -1);
    for (Symbol s : used) {
        remap[static_cast<std::size_t>(s)] = static_cast<Symbol>(blocks.size());
        blocks.push_back(gamma_blocks_in.block(s));
    }
    BlockAlphabet gamma_blocks(gamma_blocks_in.base, gamma_blocks_in.k, std::move(blocks));
    std::set<Word> allowed;
    for (const Word& p : ess.allowed)
        allowed.insert({remap[static_cast<std::size_t>(p[0])], remap[static_cast<std::size_t>(p[1])]});
    Sft gamma2(gamma_blocks.as_alphabet(), 2, std::move(allowed));

    T1WitnessCheck t1 = verify_t1_witness(sigma, gamma2, gamma_blocks);
    if (!t1.pi0_equal) throw Error("synthesize: t1 witness fails pi_0(Gamma) = Sigma");
    if (!t1.pi_all_equal) throw Error("synthesize: t1 witness fails pi(Gamma) = Sigma");

    if (t3.phi.alph != sigma.alphabet()) throw AlphabetMismatchError("synthesize: t3 phi alphabet mismatch");
    if (!valid_t0_map(sigma, t3.phi)) throw Error("synthesize: t3 witness phi is not a valid T0 map");
    if (t3.w.empty() || t3.phi.word_in_image(t3.w))
        throw Error("synthesize: t3 witness word must leave phi(A)");
    if (!sigma.member_up(UPWord({}, t3.w))) throw Error("synthesize: t3 witness word w^omega not in Sigma");

    TracerRule inner = trace_2sft(gamma2);
    BorderSystem borders = make_borders(gamma_blocks, t3.w, t3.phi);
    LocalRule rule = full_rule(borders, inner.rule);
    return SynthesisResult{sigma,  gamma2, gamma_blocks, t3,
                           inner,  borders, std::move(rule)};
}

/// An SFT cover of Sigma: Gamma over a block
/// alphabet B (with B^w inside Sigma) and a factor map onto Sigma.
struct SftCover {
    Sft gamma;           // over B.as_alphabet()
    BlockAlphabet B;
    BlockMap factor_map; // source = gamma alphabet, target = base A
};

/// The standard edge-shift cover of a presentation: the order-2 SFT of
/// consecutive edges with the labeling as a radius-0 factor map. The alphabet
/// is abstract (edges), so this feeds recode_cover, not t2_to_t1 directly.
struct EdgeShiftCover {
    Sft gamma;       // over an edge alphabet
    BlockMap labeling;
};

inline EdgeShiftCover edge_shift_cover(const SoficGraph& s) {
    if (s.is_empty_subshift()) throw Error("edge_shift_cover: empty subshift");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s.edges().size(); ++i) names.push_back("e" + std::to_string(i));
    Alphabet edge_alph(names);
    std::set<Word> allowed;
    for (std::size_t i = 0; i < s.edges().size(); ++i)
        for (std::size_t j = 0; j < s.edges().size(); ++j)
            if (s.edges()[i].to == s.edges()[j].from)
                allowed.insert({static_cast<Symbol>(i), static_cast<Symbol>(j)});
    std::vector<Symbol> image;
    for (const Edge& e : s.edges()) image.push_back(e.sym);
    BlockMap labeling = BlockMap::radius0(edge_alph, s.alphabet(), image);
    return EdgeShiftCover{Sft(edge_alph, 2, std::move(allowed)), std::move(labeling)};
}

/// Recoding of an abstract cover onto a block alphabet by injecting the
/// cover's symbols into the blocks.
inline SftCover recode_cover(const EdgeShiftCover& cover, const BlockAlphabet& B) {
    const int src = cover.gamma.alph.size();
    if (B.size() < src) throw Error("recode_cover: block alphabet too small");
    std::set<Word> allowed = cover.gamma.allowed;  // indices unchanged: block i encodes symbol i
    BlockMap map;
    map.source = B.as_alphabet();
    map.target = cover.labeling.target;
    map.radius = cover.labeling.radius;
    for (const auto& [key, val] : cover.labeling.table) map.table[key] = val;
    return SftCover{Sft(B.as_alphabet(), cover.gamma.order, std::move(allowed)), B, std::move(map)};
}

struct T1Witness {
    Sft sft2;             // order-2 SFT over the block symbols
    BlockAlphabet blocks; // A-level blocks
};

/// The T1-witness pipeline: pull the cover back through the
/// Psi decoder, interleave the composed factor map, pass to order 2 by the
/// higher-block recoding, and verify pi_0 = pi = Sigma.
inline T1Witness t2_to_t1(const SoficGraph& sigma, const SftCover& cover) {
    if (cover.B.base != sigma.alphabet()) throw AlphabetMismatchError("t2_to_t1: cover base mismatch");
    if (cover.factor_map.target != sigma.alphabet())
        throw AlphabetMismatchError("t2_to_t1: factor map target mismatch");

    // Cover validity: pairwise concatenations of blocks stay in the language
    // and repeat periodically inside Sigma.
    for (const Word& b1 : cover.B.blocks)
        for (const Word& b2 : cover.B.blocks) {
            Word cc = concat(b1, b2);
            if (!sigma.contains_word(cc) || !sigma.member_up(UPWord({}, cc)))
                throw Error("t2_to_t1: cover invalid (B^omega not inside Sigma)");
        }

    PsiSystem psi = multi(cover.B);
    const int n = psi.n;

    // Gamma' = Psi intersected with the decoder preimage of Gamma.
    const int K1 = std::max(psi.psi.order, cover.gamma.order + n - 1);
    std::set<Word> gp_allowed;
    for (const Word& win : sft_to_graph(psi.psi).factors(K1)) {
        std::vector<Symbol> decoded;
        for (int j = 0; j + n <= K1; ++j)
            decoded.push_back(psi.decoder.apply(subword(win, static_cast<std::size_t>(j), static_cast<std::size_t>(n))));
        bool ok = true;
        for (int j = 0; j + cover.gamma.order <= static_cast<int>(decoded.size()) && ok; ++j) {
            Word gw(decoded.begin() + j, decoded.begin() + j + cover.gamma.order);
            ok = cover.gamma.allowed.count(gw) > 0;
        }
        if (ok) gp_allowed.insert(win);
    }
    Sft gamma_prime = essential_sft(Sft(psi.psi.alph, K1, std::move(gp_allowed)));
    if (gamma_prime.allowed.empty()) throw Error("t2_to_t1: decoder preimage is empty");

    // Composed factor map psi-symbols -> A: decode then apply the cover map.
    BlockMap composed;
    composed.source = psi.psi.alph;
    composed.target = sigma.alphabet();
    composed.radius = cover.factor_map.radius + (n - 1);
    for (const Word& key : sft_to_graph(gamma_prime).factors(composed.radius + 1)) {
        Word decoded;
        for (int j = 0; j + n <= static_cast<int>(key.size()); ++j)
            decoded.push_back(psi.decoder.apply(subword(key, static_cast<std::size_t>(j), static_cast<std::size_t>(n))));
        composed.table[key] = cover.factor_map.apply(decoded);
    }

    Interleaved il = interleave_conjugate(gamma_prime, composed, psi.psi_blocks);
    if (!il.as_blocks) throw Error("t2_to_t1: interleave lost the block structure");

    HigherBlock hb = higher_block(il.sft);

    // Expand the higher blocks down to A-level blocks.
    std::vector<Word> final_blocks;
    for (const Word& blk : hb.blocks.blocks) {
        Word expanded;
        for (Symbol pair_sym : blk) {
            const Word& pw = il.as_blocks->block(pair_sym);
            expanded.insert(expanded.end(), pw.begin(), pw.end());
        }
        final_blocks.push_back(expanded);
    }
    BlockAlphabet final_ba(sigma.alphabet(), hb.blocks.k * il.as_blocks->k, std::move(final_blocks));
    Sft final_sft(final_ba.as_alphabet(), 2, hb.sft2.allowed);

    T1WitnessCheck check = verify_t1_witness(sigma, final_sft, final_ba);
    if (!check.pi0_equal) throw Error("t2_to_t1: verification failed (pi_0 != Sigma)");
    if (!check.pi_all_equal) throw Error("t2_to_t1: verification failed (pi != Sigma)");
    return T1Witness{std::move(final_sft), std::move(final_ba)};
}

}  // namespace tracecast

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/sft.hpp"

namespace tracecast {

/// Guard for dense rule tables (entries, not bytes).
inline constexpr std::uint64_t kMaxDenseEntries = 1ull << 24;
inline constexpr int kMaxDiameter = 4096;

inline std::uint64_t pow_u64(std::uint64_t base, int exp) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && v > ~0ull / base) throw Error("size overflow");
        v *= base;
    }
    return v;
}

class LocalRule;

/// Evaluation strategy of a local rule. Synthesized rules of large diameter
/// implement eval directly; dense tables cover everything file-loadable.
class RuleBackend {
public:
    virtual ~RuleBackend() = default;

    /// window has length = diameter of the owning rule.
    virtual Symbol eval(const Symbol* window) const = 0;

    /// One synchronous step on a circular word; returns false to request the
    /// generic per-cell path.
    virtual bool step_circular(const Word& /*cells*/, int /*anchor*/, int /*diameter*/,
                               Word& /*out*/) const {
        return false;
    }
};

class DenseRuleBackend : public RuleBackend {
public:
    DenseRuleBackend(int alphabet_size, int diameter, std::vector<Symbol> table)
        : asz_(alphabet_size), d_(diameter), table_(std::move(table)) {
        if (table_.size() != pow_u64(static_cast<std::uint64_t>(asz_), d_))
            throw Error("dense rule table has wrong size");
    }

    Symbol eval(const Symbol* window) const override {
        std::uint64_t idx = 0;
        for (int i = 0; i < d_; ++i) idx = idx * static_cast<std::uint64_t>(asz_) + static_cast<std::uint64_t>(window[i]);
        return table_[idx];
    }

    const std::vector<Symbol>& table() const { return table_; }

private:
    int asz_;
    int d_;
    std::vector<Symbol> table_;
};

/// CA local rule f : A^d -> A with anchor m: cell i reads x[i-m .. i-m+d).
class LocalRule {
public:
    LocalRule() = default;
    LocalRule(Alphabet alph, int anchor, int diameter, std::shared_ptr<const RuleBackend> backend)
        : alph_(std::move(alph)), anchor_(anchor), diameter_(diameter), backend_(std::move(backend)) {
        if (diameter_ < 1) throw Error("diameter must be >= 1");
        if (diameter_ > kMaxDiameter) throw Error("diameter exceeds cap");
    }

    static LocalRule dense(Alphabet alph, int anchor, int diameter, std::vector<Symbol> table) {
        if (pow_u64(static_cast<std::uint64_t>(alph.size()), diameter) > kMaxDenseEntries)
            throw Error("dense rule table too large");
        auto be = std::make_shared<DenseRuleBackend>(alph.size(), diameter, std::move(table));
        return LocalRule(std::move(alph), anchor, diameter, std::move(be));
    }

    const Alphabet& alphabet() const { return alph_; }
    int anchor() const { return anchor_; }
    int diameter() const { return diameter_; }
    const RuleBackend& backend() const { return *backend_; }
    std::shared_ptr<const RuleBackend> backend_ptr() const { return backend_; }

    Symbol eval(const Symbol* window) const { return backend_->eval(window); }
    Symbol eval(const Word& window) const {
        if (static_cast<int>(window.size()) != diameter_) throw Error("eval: window length != diameter");
        return backend_->eval(window.data());
    }

    /// The dense table when the backend stores one.
    const std::vector<Symbol>* dense_table() const {
        auto* d = dynamic_cast<const DenseRuleBackend*>(backend_.get());
        return d ? &d->table() : nullptr;
    }

private:
    Alphabet alph_;
    int anchor_ = 0;
    int diameter_ = 1;
    std::shared_ptr<const RuleBackend> backend_;
};

/// Spatially periodic configuration x_i = cells[i mod |cells|], stored with
/// its minimal period.
struct PeriodicConfig {
    Word cells;

    explicit PeriodicConfig(Word word, int phase = 0) : cells(rotated_by(std::move(word), phase)) {
        if (cells.empty()) throw Error("periodic configuration needs a nonempty word");
        cells.resize(static_cast<std::size_t>(primitive_period(cells)));
    }

    Symbol at(long long i) const {
        long long L = static_cast<long long>(cells.size());
        return cells[static_cast<std::size_t>(((i % L) + L) % L)];
    }

    bool operator==(const PeriodicConfig& o) const { return cells == o.cells; }
};

/// f extended to words: output length |w| - d + 1.
inline Word apply_to_word(const LocalRule& rule, const Word& w) {
    const int d = rule.diameter();
    if (static_cast<int>(w.size()) < d) throw Error("apply_to_word: word shorter than diameter");
    Word out;
    out.reserve(w.size() - static_cast<std::size_t>(d) + 1);
    for (std::size_t i = 0; i + static_cast<std::size_t>(d) <= w.size(); ++i)
        out.push_back(rule.eval(w.data() + i));
    return out;
}

/// One global step on a periodic configuration; the image period divides the
/// input period and is recanonicalized.
inline PeriodicConfig step_periodic(const LocalRule& rule, const PeriodicConfig& cfg) {
    const int L = static_cast<int>(cfg.cells.size());
    Word out(static_cast<std::size_t>(L));
    if (!rule.backend().step_circular(cfg.cells, rule.anchor(), rule.diameter(), out)) {
        const int d = rule.diameter(), m = rule.anchor();
        Word window(static_cast<std::size_t>(d));
        for (int j = 0; j < L; ++j) {
            for (int t = 0; t < d; ++t) {
                long long p = static_cast<long long>(j) - m + t;
                window[static_cast<std::size_t>(t)] = cfg.at(p);
            }
            out[static_cast<std::size_t>(j)] = rule.eval(window.data());
        }
    }
    return PeriodicConfig(std::move(out));
}

/// Column word (F^j(x)_0)_{0<=j<=t}.
inline Word trace_periodic(const LocalRule& rule, PeriodicConfig cfg, int t) {
    Word out;
    out.reserve(static_cast<std::size_t>(t) + 1);
    out.push_back(cfg.cells[0]);
    for (int j = 0; j < t; ++j) {
        cfg = step_periodic(rule, cfg);
        out.push_back(cfg.cells[0]);
    }
    return out;
}

/// Exact trace prefix of the cell at `cell0_offset` inside a finite window;
/// each step consumes m cells on the left and d-1-m on the right.
inline Word trace_prefix_window(const LocalRule& rule, const Word& window, int cell0_offset, int t) {
    const int d = rule.diameter(), m = rule.anchor();
    Word cur = window;
    int offset = cell0_offset;
    if (offset < 0 || offset >= static_cast<int>(cur.size())) throw Error("trace window too short");
    Word out{cur[static_cast<std::size_t>(offset)]};
    for (int j = 0; j < t; ++j) {
        if (static_cast<int>(cur.size()) < d) throw Error("trace window too short");
        Word next;
        next.reserve(cur.size() - static_cast<std::size_t>(d) + 1);
        for (std::size_t i = 0; i + static_cast<std::size_t>(d) <= cur.size(); ++i)
            next.push_back(rule.eval(cur.data() + i));
        offset -= m;
        cur.swap(next);
        if (offset < 0 || offset >= static_cast<int>(cur.size())) throw Error("trace window too short");
        out.push_back(cur[static_cast<std::size_t>(offset)]);
    }
    return out;
}

/// Dependence-cone width for a length-n trace prefix.
inline std::uint64_t trace_cone_width(const LocalRule& rule, int n) {
    const int m = rule.anchor(), d = rule.diameter();
    const int left = std::max(m, 0), right = std::max(d - 1 - m, 0);
    return static_cast<std::uint64_t>(n - 1) * static_cast<std::uint64_t>(left + right) + 1;
}

struct ExactTraceResult {
    std::optional<std::set<Word>> factors;  // nullopt: budget exceeded
    std::uint64_t required_windows = 0;
};

/// Exact length-n factor set of the trace subshift, by enumerating every
/// window of the dependence cone. Factors equal prefixes here because the
/// shifted trace is the trace of the stepped configuration.
inline ExactTraceResult exact_trace_factors(const LocalRule& rule, int n, std::uint64_t budget) {
    if (n < 1) throw Error("exact_trace_factors: n must be >= 1");
    const int asz = rule.alphabet().size();
    const std::uint64_t width = trace_cone_width(rule, n);
    ExactTraceResult res;
    std::uint64_t count = 1;
    for (std::uint64_t i = 0; i < width; ++i) {
        if (count > ~0ull / static_cast<std::uint64_t>(asz)) {
            count = ~0ull;
            break;
        }
        count *= static_cast<std::uint64_t>(asz);
    }
    res.required_windows = count;
    if (count > budget) return res;

    const int cell0 = (n - 1) * std::max(rule.anchor(), 0);
    std::set<Word> out;
    Word window(static_cast<std::size_t>(width), 0);
    for (;;) {
        out.insert(trace_prefix_window(rule, window, cell0, n - 1));
        int i = static_cast<int>(width) - 1;
        while (i >= 0 && window[static_cast<std::size_t>(i)] == asz - 1) {
            window[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++window[static_cast<std::size_t>(i)];
    }
    res.factors = std::move(out);
    return res;
}

/// Orbit rows restricted to a cell window.
struct SpaceTimeDiagram {
    std::vector<Word> rows;
    long long lo = 0;  // lattice position of the first column
};

inline SpaceTimeDiagram space_time(const LocalRule& rule, PeriodicConfig cfg, int t, long long lo,
                                   int width) {
    SpaceTimeDiagram d;
    d.lo = lo;
    for (int j = 0; j <= t; ++j) {
        Word row;
        row.reserve(static_cast<std::size_t>(width));
        for (int c = 0; c < width; ++c) row.push_back(cfg.at(lo + c));
        d.rows.push_back(std::move(row));
        if (j < t) cfg = step_periodic(rule, cfg);
    }
    return d;
}

inline std::string render_text(const SpaceTimeDiagram& d, const Alphabet& alph) {
    std::string out;
    for (const Word& row : d.rows) {
        out += alph.format(row);
        out += '\n';
    }
    return out;
}

/// PGM "P2": symbol index scaled to 0..255.
inline std::string render_pgm(const SpaceTimeDiagram& d, const Alphabet& alph) {
    std::string out = "P2\n";
    const int w = d.rows.empty() ? 0 : static_cast<int>(d.rows.front().size());
    out += std::to_string(w) + " " + std::to_string(d.rows.size()) + "\n255\n";
    const int denom = std::max(1, alph.size() - 1);
    for (const Word& row : d.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(row[i] * 255 / denom);
        }
        out += '\n';
    }
    return out;
}

struct GroupedRule {
    LocalRule rule;
    BlockAlphabet blocks;
};

/// Spatial grouping: one grouped cell is k original cells; the grouped rule
/// performs one step of the original CA, with anchor 0 or 1 and diameter at
/// most 3. Boundary blocks the table does not depend on are pruned, so e.g.
/// a rule reading only its own cell groups to diameter 1.
inline GroupedRule group_blocks(const LocalRule& rule, int k) {
    const int m = rule.anchor(), d = rule.diameter();
    if (k < std::max({1, m, d - 1 - m})) throw Error("group_blocks: k too small");
    BlockAlphabet blocks = BlockAlphabet::full(rule.alphabet(), k);
    const int bsz = blocks.size();

    int a0 = m > 0 ? 1 : 0;
    int D = a0 + 1 + (d - 1 - m > 0 ? 1 : 0);

    const std::uint64_t entries = pow_u64(static_cast<std::uint64_t>(bsz), D);
    if (entries > kMaxDenseEntries) throw Error("group_blocks: table too large");
    std::vector<Symbol> table(entries);
    Word expanded(static_cast<std::size_t>(D * k));
    for (std::uint64_t idx = 0; idx < entries; ++idx) {
        std::uint64_t v = idx;
        for (int b = D - 1; b >= 0; --b) {
            const Word& blk = blocks.block(static_cast<Symbol>(v % static_cast<std::uint64_t>(bsz)));
            std::copy(blk.begin(), blk.end(), expanded.begin() + static_cast<std::ptrdiff_t>(b * k));
            v /= static_cast<std::uint64_t>(bsz);
        }
        Word out_block(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) {
            int abs = a0 * k + c - m;
            out_block[static_cast<std::size_t>(c)] = rule.eval(expanded.data() + abs);
        }
        table[idx] = *blocks.find_block(out_block);
    }

    // Prune boundary blocks without influence.
    for (;;) {
        const std::uint64_t stride = pow_u64(static_cast<std::uint64_t>(bsz), D - 1);
        bool changed = false;
        if (D > 1 && a0 > 0) {
            bool indep = true;
            for (std::uint64_t s = 0; s < stride && indep; ++s)
                for (int b = 1; b < bsz && indep; ++b)
                    if (table[static_cast<std::uint64_t>(b) * stride + s] != table[s]) indep = false;
            if (indep) {
                table.assign(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(stride));
                --D;
                --a0;
                changed = true;
            }
        }
        if (!changed && D > 1) {
            bool indep = true;
            const std::uint64_t prefix_count = pow_u64(static_cast<std::uint64_t>(bsz), D - 1);
            for (std::uint64_t p = 0; p < prefix_count && indep; ++p)
                for (int b = 1; b < bsz && indep; ++b)
                    if (table[p * static_cast<std::uint64_t>(bsz) + static_cast<std::uint64_t>(b)] !=
                        table[p * static_cast<std::uint64_t>(bsz)])
                        indep = false;
            if (indep) {
                std::vector<Symbol> shrunk(prefix_count);
                for (std::uint64_t p = 0; p < prefix_count; ++p)
                    shrunk[p] = table[p * static_cast<std::uint64_t>(bsz)];
                table.swap(shrunk);
                --D;
                changed = true;
            }
        }
        if (!changed) break;
    }

    LocalRule grouped = LocalRule::dense(blocks.as_alphabet(), a0, D, std::move(table));
    return GroupedRule{std::move(grouped), std::move(blocks)};
}

/// Balance: every symbol has exactly |A|^(d-1) preimages under the rule table.
inline bool balance_check(const LocalRule& rule) {
    const int asz = rule.alphabet().size();
    const std::uint64_t total = pow_u64(static_cast<std::uint64_t>(asz), rule.diameter());
    if (total > kMaxDenseEntries) throw Error("balance_check: table too large to enumerate");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(asz), 0);
    Word w(static_cast<std::size_t>(rule.diameter()), 0);
    for (;;) {
        ++counts[static_cast<std::size_t>(rule.eval(w.data()))];
        int i = rule.diameter() - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == asz - 1) {
            w[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    const std::uint64_t expect = total / static_cast<std::uint64_t>(asz);
    return std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == expect; });
}

}  // namespace tracecast

#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/ca.hpp"
#include "tracecast/rule_io.hpp"
#include "tracecast/sofic.hpp"
#include "tracecast/synthesis.hpp"
#include "tracecast/tracecheck.hpp"

namespace tracecast {

/// Cylinder [W]_k: the configurations carrying a word of W at offset k.
struct CylinderSpec {
    std::set<Word> words;
    int offset = 0;

    CylinderSpec(std::set<Word> w, int k) : words(std::move(w)), offset(k) {
        if (words.empty()) throw Error("cylinder needs a nonempty word set");
        std::size_t len = words.begin()->size();
        for (const Word& x : words)
            if (x.size() != len) throw Error("cylinder words must have equal length");
    }

    std::size_t length() const { return words.begin()->size(); }

    bool contains(const Word& window, int window_offset) const {
        int rel = offset - window_offset;
        if (rel < 0 || rel + static_cast<int>(length()) > static_cast<int>(window.size())) return false;
        return words.count(subword(window, static_cast<std::size_t>(rel), length())) > 0;
    }
};

/// Exact rule tables of the example CAs shipped with the toolkit.
inline LocalRule builtin(const std::string& name) {
    const Alphabet bin = Alphabet::binary();
    if (name == "negation") {
        // f(x0,x1) = 1 - x0
        return LocalRule::dense(bin, 0, 2, {1, 1, 0, 0});
    }
    if (name == "shift") {
        return LocalRule::dense(bin, 0, 2, {0, 1, 0, 1});
    }
    if (name == "identity") {
        return LocalRule::dense(bin, 0, 1, {0, 1});
    }
    if (name == "non_t3") {
        // anchor 3, diameter 7; four overrides, else the cell's own state
        std::vector<std::pair<RulePattern, Symbol>> rows;
        auto pat = [&](const std::string& s) {
            RulePattern p;
            for (char c : s) p.push_back(c == '?' ? -1 : c - '0');
            return p;
        };
        rows.emplace_back(pat("?000111"), 1);
        rows.emplace_back(pat("000111?"), 0);
        rows.emplace_back(pat("?001011"), 0);
        rows.emplace_back(pat("001011?"), 1);
        return LocalRule::dense(bin, 3, 7, expand_patterns(bin, 3, 7, rows, 0, {}));
    }
    if (name == "particle") {
        // alphabet {b,r,l,w}: white, right, left, wall; anchor 1, diameter 3;
        // first applicable row is used (left to right).
        Alphabet a({"b", "r", "l", "w"});
        auto sym = [&](char c) { return *a.find(std::string(1, c)); };
        std::vector<std::pair<RulePattern, Symbol>> rows;
        auto pat = [&](const std::string& s) {
            RulePattern p;
            for (char c : s) p.push_back(c == '?' ? -1 : sym(c));
            return p;
        };
        rows.emplace_back(pat("rl?"), sym('w'));
        rows.emplace_back(pat("?rl"), sym('w'));
        rows.emplace_back(pat("r?l"), sym('w'));
        rows.emplace_back(pat("?w?"), sym('w'));
        rows.emplace_back(pat("?rw"), sym('l'));
        rows.emplace_back(pat("wl?"), sym('r'));
        rows.emplace_back(pat("r??"), sym('r'));
        rows.emplace_back(pat("??l"), sym('l'));
        rows.emplace_back(pat("???"), sym('b'));
        return LocalRule::dense(a, 1, 3, expand_patterns(a, 1, 3, rows, 0, {}));
    }
    throw Error("unknown builtin '" + name + "'");
}

/// The defining pattern rows of a builtin, for golden-file comparison.
inline std::string builtin_source(const std::string& name) {
    if (name == "particle")
        return "alphabet: b r l w\n"
               "anchor: 1\n"
               "diameter: 3\n"
               "map: rl? -> w\n"
               "map: ?rl -> w\n"
               "map: r?l -> w\n"
               "map: ?w? -> w\n"
               "map: ?rw -> l\n"
               "map: wl? -> r\n"
               "map: r?? -> r\n"
               "map: ??l -> l\n"
               "map: ??? -> b\n";
    if (name == "non_t3")
        return "alphabet: 0 1\n"
               "anchor: 3\n"
               "diameter: 7\n"
               "default: identity\n"
               "map: ?000111 -> 1\n"
               "map: 000111? -> 0\n"
               "map: ?001011 -> 0\n"
               "map: 001011? -> 1\n";
    throw Error("no source for builtin '" + name + "'");
}

/// De Bruijn approximation of a subshift from its length-n factor set.
inline SoficGraph factor_approximation(const Alphabet& alph, const std::set<Word>& factors_n) {
    if (factors_n.empty()) return SoficGraph::empty_subshift(alph);
    const int n = static_cast<int>(factors_n.begin()->size());
    if (n == 1) {
        std::vector<Edge> edges;
        for (const Word& w : factors_n) edges.push_back({0, w[0], 0});
        return SoficGraph(alph, 1, std::move(edges));
    }
    std::map<Word, int> vertex;
    auto vid = [&](const Word& w) {
        auto [it, fresh] = vertex.emplace(w, static_cast<int>(vertex.size()));
        (void)fresh;
        return it->second;
    };
    std::vector<Edge> edges;
    for (const Word& w : factors_n) {
        int from = vid(subword(w, 0, static_cast<std::size_t>(n - 1)));
        int to = vid(subword(w, 1, static_cast<std::size_t>(n - 1)));
        edges.push_back({from, w[static_cast<std::size_t>(n - 1)], to});
    }
    return SoficGraph(alph, static_cast<int>(vertex.size()), std::move(edges));
}

struct SamplingParams {
    int samples = 10000;
    int max_period = 64;
    int steps = 200;
    std::uint64_t seed = 1;
    int encoder_max_period = 3;
    std::uint64_t encoder_trace_budget = 4096;  // full-CA realization traces
};

struct TraceReport {
    enum class Mode { Exact, Sampled };
    enum class Verdict { ExactEqual, ExactUnequal, SampledOk, Refuted, Inconclusive };
    Mode mode = Mode::Exact;
    Verdict verdict = Verdict::ExactEqual;
    int n = 0;
    int completeness_n = 0;
    std::uint64_t seed = 0;
    std::uint64_t required_windows = 0;
    std::uint64_t sample_count = 0;
    std::set<Word> missing;  // in Sigma, not traced / not realized
    std::set<Word> extra;    // traced, outside Sigma (sound refutations)

    bool passed() const { return verdict == Verdict::ExactEqual || verdict == Verdict::SampledOk ||
                                 verdict == Verdict::Inconclusive; }
    bool refuted() const { return verdict == Verdict::ExactUnequal || verdict == Verdict::Refuted; }

    std::string verdict_name() const {
        switch (verdict) {
            case Verdict::ExactEqual: return "exact-equal";
            case Verdict::ExactUnequal: return "exact-unequal";
            case Verdict::SampledOk: return "sampled-ok";
            case Verdict::Refuted: return "refuted";
            case Verdict::Inconclusive: return "inconclusive";
        }
        return "?";
    }

    std::string text(const Alphabet& alph) const {
        std::string out;
        out += "mode: " + std::string(mode == Mode::Exact ? "exact" : "sampled") + "\n";
        out += "verdict: " + verdict_name() + "\n";
        out += "n: " + std::to_string(n) + "\n";
        if (mode == Mode::Sampled) {
            out += "samples: " + std::to_string(sample_count) + "\n";
            out += "seed: " + std::to_string(seed) + "\n";
        } else {
            out += "windows: " + std::to_string(required_windows) + "\n";
        }
        out += "missing: " + std::to_string(missing.size());
        for (const Word& w : missing) out += " " + alph.format(w);
        out += "\nextra: " + std::to_string(extra.size());
        for (const Word& w : extra) out += " " + alph.format(w);
        out += "\n";
        return out;
    }
};

/// Compares the trace subshift of a rule with a target subshift at factor
/// length n. Exact when the dependence cone fits the budget; otherwise
/// sampled soundness (every traced factor must lie in the target) plus a
/// realization sweep for the completeness direction. Sampled "extra" findings
/// are sound refutations; unrealized factors only make the verdict
/// inconclusive.
inline TraceReport compare_trace_language(const LocalRule& rule, const SoficGraph& sigma, int n,
                                          std::uint64_t budget, const SamplingParams& params = {},
                                          const SynthRuleParts* synth = nullptr,
                                          int completeness_n = -1) {
    if (rule.alphabet() != sigma.alphabet())
        throw AlphabetMismatchError("compare_trace_language: alphabet mismatch");
    TraceReport rep;
    rep.n = n;
    rep.completeness_n = completeness_n < 0 ? n : completeness_n;
    rep.seed = params.seed;

    ExactTraceResult exact = exact_trace_factors(rule, n, budget);
    rep.required_windows = exact.required_windows;
    if (exact.factors) {
        rep.mode = TraceReport::Mode::Exact;
        std::set<Word> target = sigma.factors(n);
        for (const Word& w : target)
            if (!exact.factors->count(w)) rep.missing.insert(w);
        for (const Word& w : *exact.factors)
            if (!target.count(w)) rep.extra.insert(w);
        rep.verdict = rep.missing.empty() && rep.extra.empty() ? TraceReport::Verdict::ExactEqual
                                                               : TraceReport::Verdict::ExactUnequal;
        return rep;
    }

    rep.mode = TraceReport::Mode::Sampled;
    if (params.steps + 1 < n)
        throw Error("compare_trace_language: sampled traces shorter than the factor length");
    std::set<Word> target = sigma.factors(n);
    std::set<Word> unrealized = sigma.factors(rep.completeness_n);
    auto record_trace = [&](const Word& trace) {
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= trace.size(); ++i) {
            Word win(trace.begin() + static_cast<std::ptrdiff_t>(i),
                     trace.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(n)));
            if (!target.count(win)) rep.extra.insert(win);
        }
        for (std::size_t i = 0; i + static_cast<std::size_t>(rep.completeness_n) <= trace.size(); ++i)
            unrealized.erase(Word(trace.begin() + static_cast<std::ptrdiff_t>(i),
                                  trace.begin() +
                                      static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(rep.completeness_n))));
    };

    // (a) soundness on random periodic configurations
    std::mt19937_64 rng(params.seed);
    for (int s = 0; s < params.samples; ++s) {
        int period = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.max_period));
        Word cells(static_cast<std::size_t>(period));
        for (Symbol& c : cells) c = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(rule.alphabet().size()));
        record_trace(trace_periodic(rule, PeriodicConfig(std::move(cells)), params.steps));
        ++rep.sample_count;
    }

    // (b) completeness: uniform configurations and, for synthesized rules,
    // valid encodings at every column until the targets are realized or the
    // trace budget runs out.
    for (Symbol a = 0; a < rule.alphabet().size(); ++a)
        record_trace(trace_periodic(rule, PeriodicConfig(Word{a}), params.steps));
    if (synth) {
        const int h = synth->borders.h;
        const int k = synth->blocks.k;
        const int bsz = synth->blocks.size();
        std::uint64_t trace_budget = params.encoder_trace_budget;
        auto enumerate_y = [&](int period, auto&& body) {
            std::uint64_t total = pow_u64(static_cast<std::uint64_t>(bsz), period);
            for (std::uint64_t v = 0; v < total && !unrealized.empty(); ++v) {
                std::vector<Symbol> y;
                std::uint64_t x = v;
                for (int i = 0; i < period; ++i) {
                    y.push_back(static_cast<Symbol>(x % static_cast<std::uint64_t>(bsz)));
                    x /= static_cast<std::uint64_t>(bsz);
                }
                body(y);
            }
        };
        for (int period = 1; period <= params.encoder_max_period && !unrealized.empty(); ++period)
            enumerate_y(period, [&](const std::vector<Symbol>& y) {
                for (int col = 0; col < h && !unrealized.empty() && trace_budget > 0; ++col) {
                    --trace_budget;
                    record_trace(trace_periodic(rule, encode_blocks(synth->borders, y, col), params.steps));
                }
            });

        // Longer block sequences, screened with the cheap inner rule first;
        // a hit is confirmed on the actual synthesized CA.
        const int max_search_period = rep.completeness_n + 2;
        std::uint64_t candidate_budget = 1 << 18;
        for (int period = params.encoder_max_period + 1;
             period <= max_search_period && !unrealized.empty() && candidate_budget > 0; ++period) {
            enumerate_y(period, [&](const std::vector<Symbol>& y) {
                if (candidate_budget == 0) return;
                --candidate_budget;
                Word inner_trace =
                    trace_periodic(synth->inner.rule, PeriodicConfig(Word(y.begin(), y.end())), params.steps);
                for (int q = 0; q < k; ++q) {
                    Word projected;
                    for (Symbol b : inner_trace)
                        projected.push_back(synth->blocks.block(b)[static_cast<std::size_t>(q)]);
                    bool hit = false;
                    for (std::size_t i = 0;
                         i + static_cast<std::size_t>(rep.completeness_n) <= projected.size() && !hit; ++i) {
                        Word win(projected.begin() + static_cast<std::ptrdiff_t>(i),
                                 projected.begin() +
                                     static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(rep.completeness_n)));
                        hit = unrealized.count(win) > 0;
                    }
                    if (hit && trace_budget > 0) {
                        --trace_budget;
                        record_trace(trace_periodic(rule, encode_blocks(synth->borders, y, q), params.steps));
                    }
                }
            });
        }
    }

    rep.missing = unrealized;
    rep.verdict = !rep.extra.empty()   ? TraceReport::Verdict::Refuted
                  : !rep.missing.empty() ? TraceReport::Verdict::Inconclusive
                                         : TraceReport::Verdict::SampledOk;
    return rep;
}

struct StabilityReport {
    std::uint64_t samples = 0;
    std::uint64_t violations_preimage = 0;    // F^-1([B Upsilon]) = [Theta]
    std::uint64_t violations_theta = 0;       // F([Theta]) inside [Theta]
    std::uint64_t violations_complement = 0;  // F(complement) stays outside
    std::uint64_t seed = 0;
    std::vector<std::string> witnesses;

    bool ok() const {
        return violations_preimage == 0 && violations_theta == 0 && violations_complement == 0;
    }
};

/// Sampled check of border-mode stability on windows wide enough to decide membership
/// on both sides of one step. Samples mix random windows, valid encodings,
/// single-letter corruptions of valid encodings, and uniform words.
inline StabilityReport stability_check(const SynthRuleParts& parts, const LocalRule& rule, int samples,
                                       std::uint64_t seed) {
    const BorderSystem& bs = parts.borders;
    const int h = bs.h;
    const int d = rule.diameter(), m = rule.anchor();
    const int width = d + 2 * h;
    StabilityReport rep;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    const Alphabet& alph = rule.alphabet();

    auto encoding_window = [&](int corruptions) {
        int period = 1 + static_cast<int>(rng() % 3);
        std::vector<Symbol> y;
        for (int i = 0; i < period; ++i)
            y.push_back(static_cast<Symbol>(rng() % static_cast<std::uint64_t>(parts.blocks.size())));
        PeriodicConfig cfg = encode_blocks(bs, y, static_cast<int>(rng() % static_cast<std::uint64_t>(h)));
        Word w(static_cast<std::size_t>(width));
        for (int i = 0; i < width; ++i) w[static_cast<std::size_t>(i)] = cfg.at(i);
        for (int c = 0; c < corruptions; ++c)
            w[rng() % w.size()] = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(alph.size()));
        return w;
    };

    auto theta_in = [&](const Word& w, int at) {
        return theta_member(bs, subword(w, static_cast<std::size_t>(at), static_cast<std::size_t>(2 * h)));
    };

    for (int s = 0; s < samples; ++s) {
        Word window;
        switch (s % 4) {
            case 0: {
                window.resize(static_cast<std::size_t>(width));
                for (Symbol& c : window) c = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(alph.size()));
                break;
            }
            case 1: window = encoding_window(0); break;
            case 2: window = encoding_window(1); break;
            default: window.assign(static_cast<std::size_t>(width),
                                   static_cast<Symbol>(rng() % static_cast<std::uint64_t>(alph.size())));
        }
        Word image = apply_to_word(rule, window);  // image[i] = F(x)_{m+i}
        // Test lattice offset m: x-window [m, m+2h), image [0, 2h].
        bool x_theta = theta_in(window, m);
        bool img_bu = bs.is_bupsilon(image.data());
        if (img_bu != x_theta) {
            ++rep.violations_preimage;
            if (rep.witnesses.size() < 8) rep.witnesses.push_back("preimage: " + alph.format(window));
        }
        if (x_theta) {
            if (!theta_in(image, 0)) {
                ++rep.violations_theta;
                if (rep.witnesses.size() < 8) rep.witnesses.push_back("theta: " + alph.format(window));
            }
        } else {
            if (theta_in(image, 0)) {
                ++rep.violations_complement;
                if (rep.witnesses.size() < 8) rep.witnesses.push_back("complement: " + alph.format(window));
            }
        }
        ++rep.samples;
    }
    return rep;
}

inline StabilityReport stability_check(const SynthesisResult& r, int samples, std::uint64_t seed) {
    SynthRuleParts parts{r.gamma_blocks, r.t3, r.inner, r.borders};
    return stability_check(parts, r.rule, samples, seed);
}

/// Exhaustive border-column check: every column of every border orbit is an
/// ultimately periodic word inside the target subshift.
inline bool border_columns_check(const BorderSystem& bs, const SoficGraph& sigma) {
    for (const Word& b0 : bs.upsilon) {
        std::vector<Word> orbit{b0};
        std::map<Word, int> seen{{b0, 0}};
        int cycle_start = -1;
        for (;;) {
            Word next = border_step(bs, orbit.back());
            auto it = seen.find(next);
            if (it != seen.end()) {
                cycle_start = it->second;
                break;
            }
            seen.emplace(next, static_cast<int>(orbit.size()));
            orbit.push_back(std::move(next));
        }
        for (int col = 0; col < bs.l; ++col) {
            Word pre, per;
            for (int j = 0; j < cycle_start; ++j) pre.push_back(orbit[static_cast<std::size_t>(j)][static_cast<std::size_t>(col)]);
            for (int j = cycle_start; j < static_cast<int>(orbit.size()); ++j)
                per.push_back(orbit[static_cast<std::size_t>(j)][static_cast<std::size_t>(col)]);
            if (!sigma.member_up(UPWord(std::move(pre), std::move(per)))) return false;
        }
    }
    return true;
}

/// Simulation faithfulness: the trace of an encoded configuration at column q equals
/// the q-th projection of the inner rule's trace.
inline bool simulation_check(const SynthesisResult& r, const std::vector<Symbol>& y, int t, int q) {
    if (q < 0 || q >= r.gamma_blocks.k) throw Error("simulation_check: column out of range");
    Word lhs = trace_periodic(r.rule, r.encode(y, q), t);
    Word inner_trace = trace_periodic(r.inner.rule, PeriodicConfig(Word(y.begin(), y.end())), t);
    Word rhs;
    for (Symbol b : inner_trace) rhs.push_back(r.gamma_blocks.block(b)[static_cast<std::size_t>(q)]);
    return lhs == rhs;
}

/// The trace of the walled left particle is the prefix of
/// (l b^2p r b^2q)^omega.
inline bool walled_particle_check(int p, int q, int t) {
    LocalRule rule = builtin("particle");
    const Alphabet& a = rule.alphabet();
    Symbol B = *a.find("b"), R = *a.find("r"), L = *a.find("l"), W = *a.find("w");
    Word cells{L};
    cells.insert(cells.end(), static_cast<std::size_t>(q), B);
    cells.push_back(W);
    cells.insert(cells.end(), static_cast<std::size_t>(p), B);
    Word trace = trace_periodic(rule, PeriodicConfig(std::move(cells)), t);
    Word closed{L};
    closed.insert(closed.end(), static_cast<std::size_t>(2 * p), B);
    closed.push_back(R);
    closed.insert(closed.end(), static_cast<std::size_t>(2 * q), B);
    for (int j = 0; j < t; ++j)
        if (trace[static_cast<std::size_t>(j)] != closed[static_cast<std::size_t>(j) % closed.size()]) return false;
    return true;
}

}  // namespace tracecast

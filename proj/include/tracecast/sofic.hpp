#pragma once

#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"

namespace tracecast {

struct Edge {
    int from;
    Symbol sym;
    int to;
    bool operator<(const Edge& o) const {
        if (from != o.from) return from < o.from;
        if (sym != o.sym) return sym < o.sym;
        return to < o.to;
    }
    bool operator==(const Edge& o) const { return from == o.from && sym == o.sym && to == o.to; }
};

/// Labeled directed graph presenting a sofic subshift by its factor language:
/// the subshift is { z : every factor of z labels a path }. The graph is kept
/// essential (every vertex has an incoming and an outgoing edge); the empty
/// graph presents the empty subshift.
class SoficGraph {
public:
    SoficGraph() = default;

    SoficGraph(Alphabet alph, int num_vertices, std::vector<Edge> edges,
               std::vector<std::string> vertex_names = {})
        : alph_(std::move(alph)) {
        for (const Edge& e : edges) {
            if (e.from < 0 || e.from >= num_vertices || e.to < 0 || e.to >= num_vertices)
                throw Error("edge endpoint out of range");
            if (e.sym < 0 || e.sym >= alph_.size()) throw Error("edge symbol out of range");
        }
        if (vertex_names.empty()) {
            vertex_names.reserve(static_cast<std::size_t>(num_vertices));
            for (int v = 0; v < num_vertices; ++v) vertex_names.push_back("q" + std::to_string(v));
        }
        essentialize(num_vertices, std::move(edges), std::move(vertex_names));
        build_adjacency();
    }

    static SoficGraph empty_subshift(Alphabet alph) {
        SoficGraph g;
        g.alph_ = std::move(alph);
        return g;
    }

    static SoficGraph full_shift(Alphabet alph) {
        std::vector<Edge> edges;
        for (Symbol s = 0; s < alph.size(); ++s) edges.push_back({0, s, 0});
        return SoficGraph(std::move(alph), 1, std::move(edges));
    }

    const Alphabet& alphabet() const { return alph_; }
    int num_vertices() const { return static_cast<int>(names_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& vertex_names() const { return names_; }
    bool is_empty_subshift() const { return names_.empty(); }

    /// Successors of a vertex set under one symbol.
    std::vector<bool> step_set(const std::vector<bool>& from, Symbol a) const {
        std::vector<bool> out(names_.size(), false);
        for (int v = 0; v < num_vertices(); ++v) {
            if (!from[static_cast<std::size_t>(v)]) continue;
            for (const auto& [sym, to] : out_[static_cast<std::size_t>(v)])
                if (sym == a) out[static_cast<std::size_t>(to)] = true;
        }
        return out;
    }

    bool contains_word(const Word& w) const {
        if (is_empty_subshift()) return false;
        std::vector<bool> s(names_.size(), true);
        for (Symbol a : w) {
            s = step_set(s, a);
            if (std::none_of(s.begin(), s.end(), [](bool b) { return b; })) return false;
        }
        return true;
    }

    /// Exactly the length-n words of the factor language.
    std::set<Word> factors(int n) const {
        std::set<Word> out;
        if (is_empty_subshift()) return out;
        Word prefix;
        std::vector<bool> all(names_.size(), true);
        collect_factors(all, prefix, n, out);
        return out;
    }

    /// Letters that occur in the factor language.
    std::set<Symbol> letters_used() const {
        std::set<Symbol> out;
        for (const Edge& e : edges_) out.insert(e.sym);
        return out;
    }

    /// Membership of an ultimately periodic word: track the vertex set through
    /// the preperiod, then iterate the period until the set sequence cycles.
    bool member_up(const UPWord& z) const {
        if (is_empty_subshift()) return false;
        std::vector<bool> s(names_.size(), true);
        auto dead = [](const std::vector<bool>& x) {
            return std::none_of(x.begin(), x.end(), [](bool b) { return b; });
        };
        for (Symbol a : z.preperiod) {
            s = step_set(s, a);
            if (dead(s)) return false;
        }
        std::set<std::vector<bool>> seen;
        while (seen.insert(s).second) {
            for (Symbol a : z.period) {
                s = step_set(s, a);
                if (dead(s)) return false;
            }
        }
        return true;
    }

private:
    void essentialize(int num_vertices, std::vector<Edge> edges, std::vector<std::string> names) {
        std::vector<bool> alive(static_cast<std::size_t>(num_vertices), true);
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<int> indeg(static_cast<std::size_t>(num_vertices), 0);
            std::vector<int> outdeg(static_cast<std::size_t>(num_vertices), 0);
            for (const Edge& e : edges) {
                if (!alive[static_cast<std::size_t>(e.from)] || !alive[static_cast<std::size_t>(e.to)]) continue;
                ++outdeg[static_cast<std::size_t>(e.from)];
                ++indeg[static_cast<std::size_t>(e.to)];
            }
            for (int v = 0; v < num_vertices; ++v) {
                if (alive[static_cast<std::size_t>(v)] &&
                    (indeg[static_cast<std::size_t>(v)] == 0 || outdeg[static_cast<std::size_t>(v)] == 0)) {
                    alive[static_cast<std::size_t>(v)] = false;
                    changed = true;
                }
            }
        }
        std::vector<int> remap(static_cast<std::size_t>(num_vertices), -1);
        for (int v = 0; v < num_vertices; ++v) {
            if (alive[static_cast<std::size_t>(v)]) {
                remap[static_cast<std::size_t>(v)] = static_cast<int>(names_.size());
                names_.push_back(names[static_cast<std::size_t>(v)]);
            }
        }
        std::set<Edge> kept;
        for (const Edge& e : edges) {
            int f = remap[static_cast<std::size_t>(e.from)];
            int t = remap[static_cast<std::size_t>(e.to)];
            if (f >= 0 && t >= 0) kept.insert({f, e.sym, t});
        }
        edges_.assign(kept.begin(), kept.end());
    }

    void build_adjacency() {
        out_.assign(names_.size(), {});
        for (const Edge& e : edges_) out_[static_cast<std::size_t>(e.from)].push_back({e.sym, e.to});
    }

    void collect_factors(const std::vector<bool>& reach, Word& prefix, int n, std::set<Word>& out) const {
        if (static_cast<int>(prefix.size()) == n) {
            out.insert(prefix);
            return;
        }
        for (Symbol a = 0; a < alph_.size(); ++a) {
            std::vector<bool> next = step_set(reach, a);
            if (std::none_of(next.begin(), next.end(), [](bool b) { return b; })) continue;
            prefix.push_back(a);
            collect_factors(next, prefix, n, out);
            prefix.pop_back();
        }
    }

    Alphabet alph_;
    std::vector<Edge> edges_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::pair<Symbol, int>>> out_;
};

/// Minimal complete-minus-dead DFA of the factor language: state 0 is the
/// start, every state accepts, transitions of -1 lead to the (implicit) dead
/// sink. States are numbered in BFS order from the start, which makes the
/// table a canonical form: two presentations give the same table iff the
/// factor languages coincide.
struct CanonicalDfa {
    Alphabet alph;
    int num_states = 0;
    std::vector<int> delta;  // num_states * |alph|, row-major

    int next(int state, Symbol a) const {
        return delta[static_cast<std::size_t>(state) * static_cast<std::size_t>(alph.size()) +
                     static_cast<std::size_t>(a)];
    }

    bool operator==(const CanonicalDfa& o) const {
        return alph == o.alph && num_states == o.num_states && delta == o.delta;
    }
};

/// Guard against pathological subset blowup; desk-scale presentations stay
/// far below this.
inline constexpr int kMaxDfaStates = 1 << 18;

inline CanonicalDfa canonical_dfa(const SoficGraph& g) {
    CanonicalDfa dfa;
    dfa.alph = g.alphabet();
    if (g.is_empty_subshift()) return dfa;
    const int asz = g.alphabet().size();

    // Subset construction from the all-vertices start.
    std::map<std::vector<bool>, int> id;
    std::vector<std::vector<int>> trans;
    std::deque<std::vector<bool>> queue;
    std::vector<bool> start(static_cast<std::size_t>(g.num_vertices()), true);
    id.emplace(start, 0);
    trans.emplace_back(asz, -1);
    queue.push_back(start);
    while (!queue.empty()) {
        std::vector<bool> cur = queue.front();
        queue.pop_front();
        int cur_id = id.at(cur);
        for (Symbol a = 0; a < asz; ++a) {
            std::vector<bool> nxt = g.step_set(cur, a);
            if (std::none_of(nxt.begin(), nxt.end(), [](bool b) { return b; })) continue;
            auto [it, fresh] = id.emplace(nxt, static_cast<int>(trans.size()));
            if (fresh) {
                if (static_cast<int>(trans.size()) >= kMaxDfaStates)
                    throw Error("canonical_dfa: determinization exceeds the state cap");
                trans.emplace_back(asz, -1);
                queue.push_back(nxt);
            }
            trans[static_cast<std::size_t>(cur_id)][static_cast<std::size_t>(a)] = it->second;
        }
    }

    // Moore partition refinement; the dead sink is class -1.
    const int n = static_cast<int>(trans.size());
    std::vector<int> cls(static_cast<std::size_t>(n), 0);
    int num_classes = 1;
    for (;;) {
        std::map<std::vector<int>, int> sig_id;
        std::vector<int> next_cls(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            std::vector<int> sig;
            sig.push_back(cls[static_cast<std::size_t>(s)]);
            for (Symbol a = 0; a < asz; ++a) {
                int t = trans[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
                sig.push_back(t < 0 ? -1 : cls[static_cast<std::size_t>(t)]);
            }
            auto [it, fresh] = sig_id.emplace(sig, static_cast<int>(sig_id.size()));
            (void)fresh;
            next_cls[static_cast<std::size_t>(s)] = it->second;
        }
        int next_num = static_cast<int>(sig_id.size());
        cls.swap(next_cls);
        if (next_num == num_classes) break;
        num_classes = next_num;
    }

    // Canonical BFS renumbering of classes from the start class.
    std::vector<int> order(static_cast<std::size_t>(num_classes), -1);
    std::vector<int> rep(static_cast<std::size_t>(num_classes), -1);
    for (int s = n - 1; s >= 0; --s) rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(s)])] = s;
    std::deque<int> bfs;
    int assigned = 0;
    order[static_cast<std::size_t>(cls[0])] = assigned++;
    bfs.push_back(cls[0]);
    std::vector<std::vector<int>> cdelta;
    while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop_front();
        std::vector<int> row(static_cast<std::size_t>(asz), -1);
        int s = rep[static_cast<std::size_t>(c)];
        for (Symbol a = 0; a < asz; ++a) {
            int t = trans[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
            if (t < 0) continue;
            int tc = cls[static_cast<std::size_t>(t)];
            if (order[static_cast<std::size_t>(tc)] < 0) {
                order[static_cast<std::size_t>(tc)] = assigned++;
                bfs.push_back(tc);
            }
            row[static_cast<std::size_t>(a)] = order[static_cast<std::size_t>(tc)];
        }
        cdelta.push_back(std::move(row));
    }
    // Rows were produced in BFS order already.
    dfa.num_states = assigned;
    dfa.delta.clear();
    for (const auto& row : cdelta) dfa.delta.insert(dfa.delta.end(), row.begin(), row.end());
    return dfa;
}

/// The canonical DFA viewed as a presentation (used for SCC analysis). Not
/// essential in general: the start state may lack incoming edges.
inline std::vector<Edge> dfa_edges(const CanonicalDfa& dfa) {
    std::vector<Edge> out;
    for (int s = 0; s < dfa.num_states; ++s)
        for (Symbol a = 0; a < dfa.alph.size(); ++a)
            if (int t = dfa.next(s, a); t >= 0) out.push_back({s, a, t});
    return out;
}

/// Exact equality of the presented subshifts (same alphabet required).
inline bool equal(const SoficGraph& a, const SoficGraph& b) {
    if (a.alphabet() != b.alphabet()) throw AlphabetMismatchError("equal: alphabets differ");
    return canonical_dfa(a) == canonical_dfa(b);
}

namespace detail {

/// Tarjan SCC over an edge list; returns component index per vertex.
inline std::vector<int> scc_ids(int n, const std::vector<Edge>& edges, int& num_sccs) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : edges) adj[static_cast<std::size_t>(e.from)].push_back(e.to);
    std::vector<int> idx(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
        comp(static_cast<std::size_t>(n), -1);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    int counter = 0;
    num_sccs = 0;
    // Iterative Tarjan to stay safe on deep graphs.
    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (idx[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        idx[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < adj[static_cast<std::size_t>(f.v)].size()) {
                int w = adj[static_cast<std::size_t>(f.v)][f.child++];
                if (idx[static_cast<std::size_t>(w)] == -1) {
                    idx[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], idx[static_cast<std::size_t>(w)]);
                }
            } else {
                if (low[static_cast<std::size_t>(f.v)] == idx[static_cast<std::size_t>(f.v)]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        comp[static_cast<std::size_t>(w)] = num_sccs;
                        if (w == f.v) break;
                    }
                    ++num_sccs;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<std::size_t>(frames.back().v)] =
                        std::min(low[static_cast<std::size_t>(frames.back().v)], low[static_cast<std::size_t>(v)]);
            }
        }
    }
    return comp;
}

/// Subgraph of one SCC of the canonical DFA, as an essential SoficGraph.
inline SoficGraph scc_subgraph(const CanonicalDfa& dfa, const std::vector<Edge>& edges,
                               const std::vector<int>& comp, int scc) {
    std::vector<Edge> sub;
    for (const Edge& e : edges)
        if (comp[static_cast<std::size_t>(e.from)] == scc && comp[static_cast<std::size_t>(e.to)] == scc)
            sub.push_back(e);
    return SoficGraph(dfa.alph, dfa.num_states, std::move(sub));
}

}  // namespace detail

/// Transitivity: some strongly connected component of the canonical DFA
/// presents the whole factor language. (The minimal DFA itself need not be
/// strongly connected for a transitive subshift; the even shift's start state
/// is transient, so the SCC-language criterion is the right test.)
inline bool is_transitive(const SoficGraph& g) {
    if (g.is_empty_subshift()) return false;
    CanonicalDfa dfa = canonical_dfa(g);
    std::vector<Edge> edges = dfa_edges(dfa);
    int num_sccs = 0;
    std::vector<int> comp = detail::scc_ids(dfa.num_states, edges, num_sccs);
    for (int c = 0; c < num_sccs; ++c) {
        SoficGraph sub = detail::scc_subgraph(dfa, edges, comp, c);
        if (sub.is_empty_subshift()) continue;
        if (canonical_dfa(sub) == dfa) return true;
    }
    return false;
}

/// Infiniteness of the presented subshift, decided on the canonical DFA:
/// infinite iff some SCC is more than a simple cycle, or two cycles are
/// connected by a path.
inline bool is_infinite(const SoficGraph& g) {
    if (g.is_empty_subshift()) return false;
    CanonicalDfa dfa = canonical_dfa(g);
    std::vector<Edge> edges = dfa_edges(dfa);
    int num_sccs = 0;
    std::vector<int> comp = detail::scc_ids(dfa.num_states, edges, num_sccs);
    std::vector<int> scc_vertices(static_cast<std::size_t>(num_sccs), 0);
    std::vector<int> scc_edges(static_cast<std::size_t>(num_sccs), 0);
    for (int v = 0; v < dfa.num_states; ++v) ++scc_vertices[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
    std::vector<std::set<int>> cond(static_cast<std::size_t>(num_sccs));
    for (const Edge& e : edges) {
        int cf = comp[static_cast<std::size_t>(e.from)], ct = comp[static_cast<std::size_t>(e.to)];
        if (cf == ct)
            ++scc_edges[static_cast<std::size_t>(cf)];
        else
            cond[static_cast<std::size_t>(cf)].insert(ct);
    }
    std::vector<bool> has_cycle(static_cast<std::size_t>(num_sccs));
    for (int c = 0; c < num_sccs; ++c) {
        if (scc_edges[static_cast<std::size_t>(c)] > scc_vertices[static_cast<std::size_t>(c)]) return true;
        has_cycle[static_cast<std::size_t>(c)] = scc_edges[static_cast<std::size_t>(c)] >= 1;
    }
    // Reachability between distinct cycle components in the condensation.
    for (int c = 0; c < num_sccs; ++c) {
        if (!has_cycle[static_cast<std::size_t>(c)]) continue;
        std::vector<bool> seen(static_cast<std::size_t>(num_sccs), false);
        std::deque<int> q{c};
        seen[static_cast<std::size_t>(c)] = true;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : cond[static_cast<std::size_t>(x)]) {
                if (seen[static_cast<std::size_t>(y)]) continue;
                if (has_cycle[static_cast<std::size_t>(y)]) return true;
                seen[static_cast<std::size_t>(y)] = true;
                q.push_back(y);
            }
        }
    }
    return false;
}

/// Disjoint union of presentations (same alphabet), essentialized.
inline SoficGraph union_graphs(const std::vector<SoficGraph>& parts, const Alphabet& alph) {
    std::vector<Edge> edges;
    int base = 0;
    for (const SoficGraph& g : parts) {
        if (g.alphabet() != alph) throw AlphabetMismatchError("union_graphs: alphabets differ");
        for (const Edge& e : g.edges()) edges.push_back({e.from + base, e.sym, e.to + base});
        base += g.num_vertices();
    }
    if (base == 0) return SoficGraph::empty_subshift(alph);
    return SoficGraph(alph, base, std::move(edges));
}

}  // namespace tracecast

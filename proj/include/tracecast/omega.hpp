#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/sofic.hpp"

namespace tracecast {

/// AST for omega-expressions: finite regex operators plus a trailing ^w.
/// Grammar: expr := term ('+' term)*; term := factor+;
/// factor := atom ('*'|'^w')?; atom := symbol | 'e' | '(' expr ')'.
struct OmegaExpr {
    enum class Kind { Symbol, Epsilon, Concat, Union, Star, Omega };
    Kind kind = Kind::Epsilon;
    Symbol sym = -1;
    std::vector<OmegaExpr> children;

    static OmegaExpr symbol(Symbol s) { return {Kind::Symbol, s, {}}; }
    static OmegaExpr epsilon() { return {Kind::Epsilon, -1, {}}; }
    static OmegaExpr concat(OmegaExpr a, OmegaExpr b) {
        return {Kind::Concat, -1, {std::move(a), std::move(b)}};
    }
    static OmegaExpr alt(OmegaExpr a, OmegaExpr b) {
        return {Kind::Union, -1, {std::move(a), std::move(b)}};
    }
    static OmegaExpr star(OmegaExpr a) { return {Kind::Star, -1, {std::move(a)}}; }
    static OmegaExpr omega(OmegaExpr a) { return {Kind::Omega, -1, {std::move(a)}}; }

    bool operator==(const OmegaExpr& o) const {
        return kind == o.kind && sym == o.sym && children == o.children;
    }
};

namespace detail {

class OmegaParser {
public:
    OmegaParser(const std::string& text, const Alphabet& alph) : text_(text), alph_(alph) {}

    OmegaExpr parse() {
        OmegaExpr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    OmegaExpr parse_expr() {
        OmegaExpr e = parse_term();
        skip_ws();
        while (peek() == '+') {
            ++pos_;
            e = OmegaExpr::alt(std::move(e), parse_term());
            skip_ws();
        }
        return e;
    }

    OmegaExpr parse_term() {
        std::vector<OmegaExpr> factors;
        std::vector<bool> is_omega;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '\0' || c == '+' || c == ')') break;
            std::size_t at = pos_;
            bool omega = false;
            OmegaExpr f = parse_factor(omega);
            if (!is_omega.empty() && is_omega.back())
                throw ParseError("'^w' allowed only on the final factor of a term", at);
            factors.push_back(std::move(f));
            is_omega.push_back(omega);
        }
        if (factors.empty()) throw ParseError("empty term", pos_);
        OmegaExpr e = std::move(factors.front());
        for (std::size_t i = 1; i < factors.size(); ++i)
            e = OmegaExpr::concat(std::move(e), std::move(factors[i]));
        return e;
    }

    OmegaExpr parse_factor(bool& omega) {
        OmegaExpr a = parse_atom();
        skip_ws();
        if (peek() == '*') {
            ++pos_;
            return OmegaExpr::star(std::move(a));
        }
        if (peek() == '^') {
            if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != 'w')
                throw ParseError("expected 'w' after '^'", pos_);
            pos_ += 2;
            omega = true;
            return OmegaExpr::omega(std::move(a));
        }
        return a;
    }

    OmegaExpr parse_atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            OmegaExpr e = parse_expr();
            skip_ws();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        // Longest symbol match; a literal alphabet symbol wins over epsilon.
        std::size_t best = 0;
        Symbol match = -1;
        for (Symbol s = 0; s < alph_.size(); ++s) {
            const std::string& n = alph_.symbols()[static_cast<std::size_t>(s)];
            if (n.size() > best && text_.compare(pos_, n.size(), n) == 0) {
                best = n.size();
                match = s;
            }
        }
        if (match >= 0) {
            pos_ += best;
            return OmegaExpr::symbol(match);
        }
        if (c == 'e') {
            ++pos_;
            return OmegaExpr::epsilon();
        }
        if (c == '\0') throw ParseError("unexpected end of expression", pos_);
        throw ParseError(std::string("unknown symbol '") + c + "'", pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    const std::string& text_;
    const Alphabet& alph_;
    std::size_t pos_ = 0;
};

inline bool has_omega(const OmegaExpr& e) {
    if (e.kind == OmegaExpr::Kind::Omega) return true;
    for (const OmegaExpr& c : e.children)
        if (has_omega(c)) return true;
    return false;
}

/// Whether the denoted finite language contains a nonempty word.
inline bool has_nonempty_word(const OmegaExpr& e) {
    switch (e.kind) {
        case OmegaExpr::Kind::Symbol: return true;
        case OmegaExpr::Kind::Epsilon: return false;
        case OmegaExpr::Kind::Concat:
            return has_nonempty_word(e.children[0]) || has_nonempty_word(e.children[1]);
        case OmegaExpr::Kind::Union:
            return has_nonempty_word(e.children[0]) || has_nonempty_word(e.children[1]);
        case OmegaExpr::Kind::Star: return has_nonempty_word(e.children[0]);
        case OmegaExpr::Kind::Omega: return has_nonempty_word(e.children[0]);
    }
    return false;
}

/// Shortest word of the denoted finite language (for generator points).
inline Word shortest_word(const OmegaExpr& e, bool nonempty) {
    switch (e.kind) {
        case OmegaExpr::Kind::Symbol: return {e.sym};
        case OmegaExpr::Kind::Epsilon:
            if (nonempty) throw Error("no nonempty word");
            return {};
        case OmegaExpr::Kind::Concat: {
            if (!nonempty) return concat(shortest_word(e.children[0], false), shortest_word(e.children[1], false));
            // Put the nonempty part wherever it is shortest.
            Word best;
            bool have = false;
            auto consider = [&](bool left_ne) {
                try {
                    Word w = concat(shortest_word(e.children[0], left_ne),
                                    shortest_word(e.children[1], !left_ne && nonempty));
                    if (!w.empty() && (!have || w.size() < best.size())) {
                        best = w;
                        have = true;
                    }
                } catch (const Error&) {
                }
            };
            consider(true);
            consider(false);
            if (!have) throw Error("no nonempty word");
            return best;
        }
        case OmegaExpr::Kind::Union: {
            Word best;
            bool have = false;
            for (const OmegaExpr& c : e.children) {
                try {
                    Word w = shortest_word(c, nonempty);
                    if (!have || w.size() < best.size()) {
                        best = w;
                        have = true;
                    }
                } catch (const Error&) {
                }
            }
            if (!have) throw Error("no nonempty word");
            return best;
        }
        case OmegaExpr::Kind::Star:
            if (nonempty) return shortest_word(e.children[0], true);
            return {};
        case OmegaExpr::Kind::Omega: return shortest_word(e.children[0], nonempty);
    }
    return {};
}

/// Thompson fragment with epsilon edges.
struct NfaBuilder {
    struct Frag {
        int start;
        int accept;
    };
    std::vector<std::vector<std::pair<Symbol, int>>> letter;  // state -> (symbol, target)
    std::vector<std::vector<int>> eps;

    int add_state() {
        letter.emplace_back();
        eps.emplace_back();
        return static_cast<int>(letter.size()) - 1;
    }

    Frag build(const OmegaExpr& e) {
        switch (e.kind) {
            case OmegaExpr::Kind::Symbol: {
                int s = add_state(), t = add_state();
                letter[static_cast<std::size_t>(s)].push_back({e.sym, t});
                return {s, t};
            }
            case OmegaExpr::Kind::Epsilon: {
                int s = add_state(), t = add_state();
                eps[static_cast<std::size_t>(s)].push_back(t);
                return {s, t};
            }
            case OmegaExpr::Kind::Concat: {
                Frag a = build(e.children[0]);
                Frag b = build(e.children[1]);
                eps[static_cast<std::size_t>(a.accept)].push_back(b.start);
                return {a.start, b.accept};
            }
            case OmegaExpr::Kind::Union: {
                Frag a = build(e.children[0]);
                Frag b = build(e.children[1]);
                int s = add_state(), t = add_state();
                eps[static_cast<std::size_t>(s)].push_back(a.start);
                eps[static_cast<std::size_t>(s)].push_back(b.start);
                eps[static_cast<std::size_t>(a.accept)].push_back(t);
                eps[static_cast<std::size_t>(b.accept)].push_back(t);
                return {s, t};
            }
            case OmegaExpr::Kind::Star: {
                Frag a = build(e.children[0]);
                int s = add_state(), t = add_state();
                eps[static_cast<std::size_t>(s)].push_back(t);
                eps[static_cast<std::size_t>(s)].push_back(a.start);
                eps[static_cast<std::size_t>(a.accept)].push_back(a.start);
                eps[static_cast<std::size_t>(a.accept)].push_back(t);
                return {s, t};
            }
            case OmegaExpr::Kind::Omega:
                throw Error("omega inside a finite fragment");
        }
        throw Error("unreachable");
    }

    std::vector<int> closure(int s) const {
        std::vector<int> out;
        std::vector<bool> seen(letter.size(), false);
        std::vector<int> stack{s};
        seen[static_cast<std::size_t>(s)] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            out.push_back(v);
            for (int w : eps[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
        }
        return out;
    }
};

}  // namespace detail

inline OmegaExpr parse_omega_expr(const std::string& text, const Alphabet& alph) {
    return detail::OmegaParser(text, alph).parse();
}

/// One top-level term U V^w, in normalized form.
struct OmegaTerm {
    OmegaExpr finite_part;  // U (omega-free; Epsilon when absent)
    OmegaExpr loop_part;    // V (omega-free)
};

/// Normalizes an expression into its top-level terms, validating the
/// U V^w / V^w shape.
inline std::vector<OmegaTerm> omega_terms(const OmegaExpr& e) {
    using K = OmegaExpr::Kind;
    switch (e.kind) {
        case K::Union: {
            std::vector<OmegaTerm> out = omega_terms(e.children[0]);
            std::vector<OmegaTerm> rhs = omega_terms(e.children[1]);
            out.insert(out.end(), rhs.begin(), rhs.end());
            return out;
        }
        case K::Concat: {
            if (detail::has_omega(e.children[0]))
                throw Error("'^w' allowed only on the final factor of a term");
            std::vector<OmegaTerm> tails = omega_terms(e.children[1]);
            for (OmegaTerm& t : tails)
                t.finite_part = t.finite_part.kind == K::Epsilon
                                    ? e.children[0]
                                    : OmegaExpr::concat(e.children[0], t.finite_part);
            return tails;
        }
        case K::Omega:
            if (detail::has_omega(e.children[0])) throw Error("nested '^w'");
            if (!detail::has_nonempty_word(e.children[0]))
                throw Error("'^w' of a language with no nonempty word");
            return {OmegaTerm{OmegaExpr::epsilon(), e.children[0]}};
        default:
            throw Error("expression denoting no infinite word (a term lacks '^w')");
    }
}

/// Compiles an expression to the essential presentation of the smallest
/// subshift containing the denoted infinite words; the factor language is the
/// factor set of those words. Construction: per-term Thompson NFA with the
/// loop part tied back on itself, epsilon elimination, liveness pruning, then
/// the essential trim. Each term's canonical generator point is checked for
/// membership afterwards; expressions whose generated subshift has no
/// essential presentation (e.g. a prefix-only letter) are rejected.
inline SoficGraph compile_expr(const OmegaExpr& e, const Alphabet& alph) {
    std::vector<OmegaTerm> terms = omega_terms(e);

    detail::NfaBuilder nfa;
    std::vector<int> term_starts;
    std::vector<int> loop_accepts;
    for (const OmegaTerm& t : terms) {
        detail::NfaBuilder::Frag u = nfa.build(t.finite_part);
        detail::NfaBuilder::Frag v = nfa.build(t.loop_part);
        nfa.eps[static_cast<std::size_t>(u.accept)].push_back(v.start);
        nfa.eps[static_cast<std::size_t>(v.accept)].push_back(v.start);
        term_starts.push_back(u.start);
        loop_accepts.push_back(v.accept);
    }

    const int n = static_cast<int>(nfa.letter.size());
    // Letter edges through epsilon closures.
    std::vector<std::set<std::pair<Symbol, int>>> e_edges(static_cast<std::size_t>(n));
    std::vector<bool> carries_accept(static_cast<std::size_t>(n), false);
    for (int s = 0; s < n; ++s) {
        for (int c : nfa.closure(s)) {
            for (const auto& le : nfa.letter[static_cast<std::size_t>(c)]) e_edges[static_cast<std::size_t>(s)].insert(le);
            for (int acc : loop_accepts)
                if (c == acc) carries_accept[static_cast<std::size_t>(s)] = true;
        }
    }

    // Liveness: reachable from a term start, and able to reach a state whose
    // closure carries a loop accept (from there a valid infinite continuation
    // exists).
    auto reach_from = [&](const std::vector<int>& seeds) {
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::vector<int> stack;
        for (int s : seeds)
            for (int c : nfa.closure(s))
                if (!seen[static_cast<std::size_t>(c)]) {
                    seen[static_cast<std::size_t>(c)] = true;
                    stack.push_back(c);
                }
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& [a, t] : e_edges[static_cast<std::size_t>(v)]) {
                (void)a;
                if (!seen[static_cast<std::size_t>(t)]) {
                    seen[static_cast<std::size_t>(t)] = true;
                    stack.push_back(t);
                }
            }
        }
        return seen;
    };
    std::vector<bool> reachable = reach_from(term_starts);
    // Backward reachability to accept carriers.
    std::vector<bool> colive(static_cast<std::size_t>(n), false);
    {
        std::vector<std::vector<int>> rev(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s)
            for (const auto& [a, t] : e_edges[static_cast<std::size_t>(s)]) {
                (void)a;
                rev[static_cast<std::size_t>(t)].push_back(s);
            }
        std::vector<int> stack;
        for (int s = 0; s < n; ++s)
            if (carries_accept[static_cast<std::size_t>(s)]) {
                colive[static_cast<std::size_t>(s)] = true;
                stack.push_back(s);
            }
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : rev[static_cast<std::size_t>(v)])
                if (!colive[static_cast<std::size_t>(w)]) {
                    colive[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
        }
    }

    std::vector<Edge> edges;
    for (int s = 0; s < n; ++s) {
        if (!reachable[static_cast<std::size_t>(s)] || !colive[static_cast<std::size_t>(s)]) continue;
        for (const auto& [a, t] : e_edges[static_cast<std::size_t>(s)])
            if (reachable[static_cast<std::size_t>(t)] && colive[static_cast<std::size_t>(t)])
                edges.push_back({s, a, t});
    }
    SoficGraph g(alph, n, std::move(edges));

    // The essential trim may drop prefix-only factors; reject expressions
    // whose generator points do not survive it.
    for (const OmegaTerm& t : terms) {
        Word u = detail::shortest_word(t.finite_part, false);
        Word v = detail::shortest_word(t.loop_part, true);
        if (!g.member_up(UPWord(u, v)))
            throw Error("expression's subshift has no essential presentation (generator " +
                        alph.format(u) + "(" + alph.format(v) + ")^w lost)");
    }
    return g;
}

inline SoficGraph compile_expr(const std::string& text, const Alphabet& alph) {
    return compile_expr(parse_omega_expr(text, alph), alph);
}

}  // namespace tracecast

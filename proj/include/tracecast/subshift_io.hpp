#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/omega.hpp"
#include "tracecast/rule_io.hpp"
#include "tracecast/sft.hpp"
#include "tracecast/sofic.hpp"

namespace tracecast {

/// A subshift read from a description file, with the original form kept for
/// serialization.
struct LoadedSubshift {
    Alphabet alphabet;
    SoficGraph graph;
    std::string kind;  // "sft" | "expr" | "graph"
    std::optional<Sft> sft;
    std::optional<std::string> expr;
};

/// Words on sft lines: single-character alphabets pack several words per
/// line; otherwise each line carries one word of space-separated symbols.
inline std::vector<Word> parse_word_list(const Alphabet& alph, const std::string& val) {
    std::vector<Word> out;
    if (alph.single_char()) {
        for (const std::string& tok : detail::split_ws(val)) out.push_back(alph.parse_word(tok));
    } else {
        out.push_back(alph.parse_word(val));
    }
    return out;
}

inline LoadedSubshift parse_subshift(const std::string& text) {
    auto kv = detail::parse_kv_lines(text);
    LoadedSubshift out;
    std::optional<int> order;
    std::vector<Word> forbidden, allowed;
    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    std::optional<std::string> expr;
    for (const auto& [key, val] : kv) {
        if (key == "alphabet")
            out.alphabet = Alphabet(detail::split_ws(val));
        else if (key == "kind")
            out.kind = val;
        else if (key == "order")
            order = std::stoi(val);
        else if (key == "forbidden") {
            auto ws = parse_word_list(out.alphabet, val);
            forbidden.insert(forbidden.end(), ws.begin(), ws.end());
        } else if (key == "allowed") {
            auto ws = parse_word_list(out.alphabet, val);
            allowed.insert(allowed.end(), ws.begin(), ws.end());
        } else if (key == "expr")
            expr = val;
        else if (key == "edge") {
            auto toks = detail::split_ws(val);
            if (toks.size() != 3) throw ParseError("edge line needs 'V1 a V2'");
            edges.emplace_back(toks[0], toks[1], toks[2]);
        } else
            throw ParseError("subshift file: unknown key '" + key + "'");
    }
    if (out.alphabet.size() == 0) throw ParseError("subshift file: missing alphabet");
    if (out.kind == "sft") {
        if (!order) throw ParseError("sft: missing order");
        if (!forbidden.empty() && !allowed.empty())
            throw ParseError("sft: give either forbidden or allowed words, not both");
        for (const Word& w : forbidden)
            if (static_cast<int>(w.size()) != *order) throw ParseError("sft: word of wrong length");
        Sft sft = allowed.empty()
                      ? Sft::from_forbidden(out.alphabet, *order,
                                            std::set<Word>(forbidden.begin(), forbidden.end()))
                      : Sft(out.alphabet, *order, std::set<Word>(allowed.begin(), allowed.end()));
        out.sft = sft;
        out.graph = sft_to_graph(sft);
    } else if (out.kind == "expr") {
        if (!expr) throw ParseError("expr: missing expression");
        out.expr = expr;
        out.graph = compile_expr(*expr, out.alphabet);
    } else if (out.kind == "graph") {
        std::map<std::string, int> vid;
        std::vector<std::string> names;
        auto id = [&](const std::string& name) {
            auto [it, fresh] = vid.emplace(name, static_cast<int>(vid.size()));
            if (fresh) names.push_back(name);
            return it->second;
        };
        std::vector<Edge> es;
        for (const auto& [from, sym, to] : edges) {
            auto s = out.alphabet.find(sym);
            if (!s) throw ParseError("edge with unknown symbol '" + sym + "'");
            int f = id(from);
            int t = id(to);
            es.push_back({f, *s, t});
        }
        out.graph = SoficGraph(out.alphabet, static_cast<int>(vid.size()), std::move(es), std::move(names));
    } else {
        throw ParseError("subshift file: unknown kind '" + out.kind + "'");
    }
    return out;
}

inline LoadedSubshift load_subshift(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open subshift file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_subshift(ss.str());
}

inline std::string save_subshift(const LoadedSubshift& s) {
    std::string out = "alphabet:";
    for (const std::string& n : s.alphabet.symbols()) out += " " + n;
    out += "\nkind: " + s.kind + "\n";
    if (s.kind == "sft") {
        const Sft& sft = *s.sft;
        out += "order: " + std::to_string(sft.order) + "\n";
        std::set<Word> forb = sft.forbidden();
        const bool use_forbidden = forb.size() <= sft.allowed.size();
        const std::set<Word>& words = use_forbidden ? forb : sft.allowed;
        const char* key = use_forbidden ? "forbidden" : "allowed";
        if (s.alphabet.single_char()) {
            out += std::string(key) + ":";
            for (const Word& w : words) out += " " + s.alphabet.format(w);
            out += "\n";
        } else {
            for (const Word& w : words) out += std::string(key) + ": " + s.alphabet.format(w) + "\n";
        }
        if (words.empty() && use_forbidden) out += std::string(key) + ":\n";
    } else if (s.kind == "expr") {
        out += "expr: " + *s.expr + "\n";
    } else {
        for (const Edge& e : s.graph.edges())
            out += "edge: " + s.graph.vertex_names()[static_cast<std::size_t>(e.from)] + " " +
                   s.alphabet.name(e.sym) + " " +
                   s.graph.vertex_names()[static_cast<std::size_t>(e.to)] + "\n";
    }
    return out;
}

}  // namespace tracecast

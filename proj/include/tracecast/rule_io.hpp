#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tracecast/alphabet.hpp"
#include "tracecast/ca.hpp"
#include "tracecast/synthesis.hpp"

namespace tracecast {

/// A rule pattern: one entry per window position, -1 meaning '?'.
using RulePattern = std::vector<Symbol>;

inline bool pattern_matches(const RulePattern& p, const Word& w) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] >= 0 && p[i] != w[i]) return false;
    return true;
}

/// Dense table from first-match-wins wildcard rows plus a default.
/// default_kind: 0 = identity (the cell's own state), 1 = phi of it,
/// -1 = no default (the rows must cover every window).
inline std::vector<Symbol> expand_patterns(const Alphabet& alph, int anchor, int diameter,
                                           const std::vector<std::pair<RulePattern, Symbol>>& rows,
                                           int default_kind, const std::vector<Symbol>& default_phi) {
    const std::uint64_t total = pow_u64(static_cast<std::uint64_t>(alph.size()), diameter);
    if (total > kMaxDenseEntries) throw Error("rule table too large");
    std::vector<Symbol> table(total);
    Word w(static_cast<std::size_t>(diameter), 0);
    for (std::uint64_t idx = 0;; ++idx) {
        Symbol out = -1;
        for (const auto& [pat, val] : rows)
            if (pattern_matches(pat, w)) {
                out = val;
                break;
            }
        if (out < 0) {
            if (default_kind < 0)
                throw Error("rule table: window " + alph.format(w) + " matches no row and there is no default");
            if (anchor < 0 || anchor >= diameter)
                throw Error("default rule needs the anchor inside the window");
            Symbol own = w[static_cast<std::size_t>(anchor)];
            out = default_kind == 0 ? own : default_phi.at(static_cast<std::size_t>(own));
        }
        table[idx] = out;
        int i = diameter - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == alph.size() - 1) {
            w[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    return table;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

/// key/value lines; repeated keys preserved in order.
inline std::vector<std::pair<std::string, std::string>> parse_kv_lines(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key: value'");
        out.emplace_back(trim(line.substr(0, colon)), trim(line.substr(colon + 1)));
    }
    return out;
}

inline RulePattern parse_pattern(const Alphabet& alph, const std::string& text, int diameter) {
    RulePattern pat;
    if (alph.single_char() && text.find(' ') == std::string::npos) {
        for (char c : text) {
            if (c == '?') {
                pat.push_back(-1);
            } else {
                auto s = alph.find(std::string(1, c));
                if (!s) throw ParseError("unknown symbol in pattern '" + text + "'");
                pat.push_back(*s);
            }
        }
    } else {
        for (const std::string& tok : split_ws(text)) {
            if (tok == "?") {
                pat.push_back(-1);
            } else {
                auto s = alph.find(tok);
                if (!s) throw ParseError("unknown symbol '" + tok + "' in pattern");
                pat.push_back(*s);
            }
        }
    }
    if (static_cast<int>(pat.size()) != diameter)
        throw ParseError("pattern '" + text + "' does not have diameter length");
    return pat;
}

inline std::vector<Symbol> parse_phi_pairs(const Alphabet& alph, const std::string& text) {
    std::vector<Symbol> image(static_cast<std::size_t>(alph.size()), -1);
    for (const std::string& tok : split_ws(text)) {
        std::size_t arrow = tok.find("->");
        if (arrow == std::string::npos) throw ParseError("expected 'a->b' in phi table");
        auto a = alph.find(tok.substr(0, arrow));
        auto b = alph.find(tok.substr(arrow + 2));
        if (!a || !b) throw ParseError("unknown symbol in phi table '" + tok + "'");
        image[static_cast<std::size_t>(*a)] = *b;
    }
    for (Symbol s : image)
        if (s < 0) throw ParseError("phi table is not total");
    return image;
}

}  // namespace detail

/// Parameters of a synthesized rule, enough to rebuild it and its encoder.
struct SynthRuleParts {
    BlockAlphabet blocks;
    T3Witness t3;
    TracerRule inner;
    BorderSystem borders;
};

struct LoadedRule {
    LocalRule rule;
    std::optional<SynthRuleParts> synth;
};

inline LoadedRule parse_rule_file(const std::string& text) {
    auto kv = detail::parse_kv_lines(text);
    Alphabet alph;
    std::optional<int> anchor, diameter;
    std::string kind = "table";
    std::vector<std::pair<std::string, std::string>> deferred;
    for (const auto& [key, val] : kv) {
        if (key == "alphabet")
            alph = Alphabet(detail::split_ws(val));
        else if (key == "anchor")
            anchor = std::stoi(val);
        else if (key == "diameter")
            diameter = std::stoi(val);
        else if (key == "kind")
            kind = val;
        else
            deferred.emplace_back(key, val);
    }
    if (alph.size() == 0) throw ParseError("rule file: missing alphabet");
    if (!anchor || !diameter) throw ParseError("rule file: missing anchor or diameter");

    if (kind == "synth") {
        int block_len = -1;
        std::vector<Word> blocks;
        std::vector<Symbol> phi_img;
        Word t3w;
        std::vector<std::tuple<std::string, std::string, std::string>> inner_rows;
        for (const auto& [key, val] : deferred) {
            if (key == "block-length")
                block_len = std::stoi(val);
            else if (key == "block")
                blocks.push_back(alph.parse_word(val));
            else if (key == "t3-phi")
                phi_img = detail::parse_phi_pairs(alph, val);
            else if (key == "t3-w")
                t3w = alph.parse_word(val);
            else if (key == "inner-map") {
                std::size_t arrow = val.find("->");
                if (arrow == std::string::npos) throw ParseError("inner-map needs '->'");
                auto lhs = detail::split_ws(val.substr(0, arrow));
                if (lhs.size() != 2) throw ParseError("inner-map needs two block arguments");
                inner_rows.emplace_back(lhs[0], lhs[1], detail::trim(val.substr(arrow + 2)));
            } else {
                throw ParseError("rule file: unknown key '" + key + "'");
            }
        }
        if (block_len <= 0 || blocks.empty() || phi_img.empty() || t3w.empty() || inner_rows.empty())
            throw ParseError("synth rule file: missing sections");
        BlockAlphabet ba(alph, block_len, blocks);
        Alphabet balph = ba.as_alphabet();
        std::vector<Symbol> itab(static_cast<std::size_t>(balph.size()) * static_cast<std::size_t>(balph.size()), -1);
        for (const auto& [a, b, c] : inner_rows) {
            auto sa = balph.find(a), sb = balph.find(b), sc = balph.find(c);
            if (!sa || !sb || !sc) throw ParseError("inner-map uses unknown block");
            itab[static_cast<std::size_t>(*sa) * static_cast<std::size_t>(balph.size()) +
                 static_cast<std::size_t>(*sb)] = *sc;
        }
        for (Symbol s : itab)
            if (s < 0) throw ParseError("inner-map is not total");
        // The successor map is construction metadata; the table alone defines
        // the rule, so reloaded rules leave it empty.
        TracerRule inner{LocalRule::dense(balph, 0, 2, itab), {}};
        PhiMap phi{alph, phi_img};
        BorderSystem borders = make_borders(ba, t3w, phi);
        LocalRule rule = full_rule(borders, inner.rule);
        if (rule.anchor() != *anchor || rule.diameter() != *diameter)
            throw ParseError("synth rule file: anchor/diameter do not match the construction");
        return LoadedRule{std::move(rule),
                          SynthRuleParts{std::move(ba), T3Witness{std::move(phi), std::move(t3w)},
                                         std::move(inner), std::move(borders)}};
    }

    // plain table kind
    std::vector<std::pair<RulePattern, Symbol>> rows;
    int default_kind = -1;
    std::vector<Symbol> default_phi;
    for (const auto& [key, val] : deferred) {
        if (key == "default") {
            if (val == "identity") {
                default_kind = 0;
            } else if (val.rfind("phi", 0) == 0) {
                default_kind = 1;
                default_phi = detail::parse_phi_pairs(alph, detail::trim(val.substr(3)));
            } else {
                throw ParseError("unknown default '" + val + "'");
            }
        } else if (key == "map") {
            std::size_t arrow = val.find("->");
            if (arrow == std::string::npos) throw ParseError("map line needs '->'");
            RulePattern pat = detail::parse_pattern(alph, detail::trim(val.substr(0, arrow)), *diameter);
            std::string out = detail::trim(val.substr(arrow + 2));
            auto s = alph.find(out);
            if (!s) throw ParseError("unknown output symbol '" + out + "'");
            rows.emplace_back(std::move(pat), *s);
        } else {
            throw ParseError("rule file: unknown key '" + key + "'");
        }
    }
    std::vector<Symbol> table = expand_patterns(alph, *anchor, *diameter, rows, default_kind, default_phi);
    return LoadedRule{LocalRule::dense(std::move(alph), *anchor, *diameter, std::move(table)), std::nullopt};
}

inline LoadedRule load_rule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rule file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_rule_file(ss.str());
}

/// Serializes a dense rule as one map line per window.
inline std::string save_rule_file(const LocalRule& rule) {
    const std::vector<Symbol>* table = rule.dense_table();
    if (!table) throw Error("save_rule_file: only dense rules serialize as tables");
    std::string out;
    out += "alphabet:";
    for (const std::string& s : rule.alphabet().symbols()) out += " " + s;
    out += "\nanchor: " + std::to_string(rule.anchor());
    out += "\ndiameter: " + std::to_string(rule.diameter()) + "\n";
    const int asz = rule.alphabet().size();
    Word w(static_cast<std::size_t>(rule.diameter()), 0);
    for (std::uint64_t idx = 0;; ++idx) {
        out += "map: " + rule.alphabet().format(w) + " -> " +
               rule.alphabet().name((*table)[idx]) + "\n";
        int i = rule.diameter() - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == asz - 1) {
            w[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    return out;
}

/// Serializes a synthesized rule by its construction parameters.
inline std::string save_synth_rule_file(const SynthesisResult& r) {
    std::string out;
    out += "alphabet:";
    for (const std::string& s : r.rule.alphabet().symbols()) out += " " + s;
    out += "\nkind: synth";
    out += "\nanchor: " + std::to_string(r.rule.anchor());
    out += "\ndiameter: " + std::to_string(r.rule.diameter());
    out += "\nblock-length: " + std::to_string(r.gamma_blocks.k);
    for (const Word& b : r.gamma_blocks.blocks) out += "\nblock: " + r.gamma_blocks.base.format(b);
    out += "\nt3-phi:";
    for (Symbol a = 0; a < r.t3.phi.alph.size(); ++a)
        out += " " + r.t3.phi.alph.name(a) + "->" + r.t3.phi.alph.name(r.t3.phi.image[static_cast<std::size_t>(a)]);
    out += "\nt3-w: " + r.t3.phi.alph.format(r.t3.w);
    const Alphabet& balph = r.inner.rule.alphabet();
    for (Symbol a = 0; a < balph.size(); ++a)
        for (Symbol b = 0; b < balph.size(); ++b) {
            Word pair{a, b};
            out += "\ninner-map: " + balph.name(a) + " " + balph.name(b) + " -> " +
                   balph.name(r.inner.rule.eval(pair));
        }
    out += "\n";
    return out;
}

}  // namespace tracecast

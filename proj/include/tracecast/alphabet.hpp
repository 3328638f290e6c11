#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracecast {

/// Index of a letter within an Alphabet.
using Symbol = int;

/// A finite word: a sequence of symbol indices (possibly empty).
using Word = std::vector<Symbol>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input text could not be parsed; carries a position when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::size_t pos = std::string::npos)
        : Error(pos == std::string::npos ? msg : msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

/// A declared letter does not occur in the subshift (or alphabets disagree).
class AlphabetMismatchError : public Error {
public:
    using Error::Error;
};

/// Ordered set of distinct symbol identifiers. Symbols are compared by index
/// within one alphabet; cross-alphabet operations need explicit relabeling.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw Error("alphabet must have at least one symbol");
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].empty()) throw Error("empty symbol identifier");
            auto [it, fresh] = index_.emplace(symbols_[i], static_cast<Symbol>(i));
            if (!fresh) throw Error("duplicate symbol '" + symbols_[i] + "' in alphabet");
        }
    }

    static Alphabet binary() { return Alphabet({"0", "1"}); }

    int size() const { return static_cast<int>(symbols_.size()); }

    const std::string& name(Symbol s) const { return symbols_.at(static_cast<std::size_t>(s)); }

    const std::vector<std::string>& symbols() const { return symbols_; }

    std::optional<Symbol> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool single_char() const {
        return std::all_of(symbols_.begin(), symbols_.end(),
                           [](const std::string& s) { return s.size() == 1; });
    }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }
    bool operator!=(const Alphabet& o) const { return !(*this == o); }

    /// Formats a word: concatenated when all symbols are single characters,
    /// space-separated otherwise.
    std::string format(const Word& w) const {
        std::string out;
        const bool tight = single_char();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!tight && i > 0) out += ' ';
            out += name(w[i]);
        }
        return out;
    }

    /// Parses a word. Space-separated tokens are looked up directly; contiguous
    /// text is split by greedy longest match.
    Word parse_word(const std::string& text) const {
        Word out;
        if (text.find_first_of(" \t") != std::string::npos) {
            std::istringstream in(text);
            std::string tok;
            while (in >> tok) {
                auto s = find(tok);
                if (!s) throw ParseError("unknown symbol '" + tok + "'");
                out.push_back(*s);
            }
            return out;
        }
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t best = 0;
            Symbol match = -1;
            for (Symbol s = 0; s < size(); ++s) {
                const std::string& n = symbols_[static_cast<std::size_t>(s)];
                if (n.size() > best && text.compare(pos, n.size(), n) == 0) {
                    best = n.size();
                    match = s;
                }
            }
            if (match < 0) throw ParseError("unknown symbol in word '" + text + "'", pos);
            out.push_back(match);
            pos += best;
        }
        return out;
    }

private:
    std::vector<std::string> symbols_;
    std::map<std::string, Symbol> index_;
};

/// Rotation gamma(w) = w[1..]w[0].
inline Word rotated(const Word& w) {
    if (w.size() <= 1) return w;
    Word out(w.begin() + 1, w.end());
    out.push_back(w.front());
    return out;
}

inline Word rotated_by(Word w, int q) {
    if (w.empty()) return w;
    q = ((q % static_cast<int>(w.size())) + static_cast<int>(w.size())) % static_cast<int>(w.size());
    std::rotate(w.begin(), w.begin() + q, w.end());
    return w;
}

inline Word reversed(Word w) {
    std::reverse(w.begin(), w.end());
    return w;
}

inline Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Word subword(const Word& w, std::size_t from, std::size_t len) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(from),
                w.begin() + static_cast<std::ptrdiff_t>(from + len));
}

/// Base-|A| encoding with w[0] most significant.
inline std::uint64_t encode_word(const Word& w, int alphabet_size) {
    std::uint64_t v = 0;
    for (Symbol s : w) v = v * static_cast<std::uint64_t>(alphabet_size) + static_cast<std::uint64_t>(s);
    return v;
}

inline Word decode_word(std::uint64_t v, int len, int alphabet_size) {
    Word w(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<Symbol>(v % static_cast<std::uint64_t>(alphabet_size));
        v /= static_cast<std::uint64_t>(alphabet_size);
    }
    return w;
}

/// Length of the primitive root of w (w is a power of its first p letters).
inline int primitive_period(const Word& w) {
    const int n = static_cast<int>(w.size());
    for (int p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (int i = p; i < n && ok; ++i) ok = w[static_cast<std::size_t>(i)] == w[static_cast<std::size_t>(i - p)];
        if (ok) return p;
    }
    return n;
}

/// Ultimately periodic infinite word u v^omega, kept in canonical form
/// (primitive period, minimal preperiod). Equality is structural equality of
/// the canonical form.
struct UPWord {
    Word preperiod;
    Word period;

    UPWord(Word pre, Word per) : preperiod(std::move(pre)), period(std::move(per)) {
        if (period.empty()) throw Error("UPWord requires a nonempty period");
        const int p = primitive_period(period);
        period.resize(static_cast<std::size_t>(p));
        while (!preperiod.empty() && preperiod.back() == period.back()) {
            preperiod.pop_back();
            std::rotate(period.begin(), period.end() - 1, period.end());
        }
    }

    Symbol at(std::size_t i) const {
        if (i < preperiod.size()) return preperiod[i];
        return period[(i - preperiod.size()) % period.size()];
    }

    /// First n letters as a finite word.
    Word prefix(std::size_t n) const {
        Word out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
        return out;
    }

    bool operator==(const UPWord& o) const {
        return preperiod == o.preperiod && period == o.period;
    }
    bool operator!=(const UPWord& o) const { return !(*this == o); }
    bool operator<(const UPWord& o) const {
        if (preperiod != o.preperiod) return preperiod < o.preperiod;
        return period < o.period;
    }

    std::string format(const Alphabet& a) const {
        std::string out;
        if (!preperiod.empty()) out += a.format(preperiod) + (a.single_char() ? "" : " ");
        out += "(" + a.format(period) + ")^w";
        return out;
    }
};

}  // namespace tracecast

#pragma once

// Alphabet and string model plus the extended Hamming and Levenshtein
// distances. Strings never store the trailing run of empty letters; distance
// code pads logically.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strlap/error.hpp"

namespace strlap {

using Symbol = std::uint16_t;

class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
        if (letters_.empty())
            throw Error("alphabet must contain at least one letter");
        if (letters_.size() > 0xFFFF)
            throw Error("alphabet too large");
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            if (letters_[i].empty())
                throw Error("alphabet letters must be nonempty");
            for (std::size_t j = 0; j < i; ++j)
                if (letters_[i] == letters_[j])
                    throw Error("duplicate alphabet letter '" + letters_[i] + "'");
        }
    }

    /// One letter per character, in the given order.
    static std::shared_ptr<const Alphabet> from_chars(std::string_view chars) {
        std::vector<std::string> letters;
        letters.reserve(chars.size());
        for (char c : chars)
            letters.emplace_back(1, c);
        return std::make_shared<const Alphabet>(std::move(letters));
    }

    /// Number of nonempty letters (z - 1).
    std::size_t size() const noexcept { return letters_.size(); }
    const std::string& letter(Symbol h) const { return letters_.at(h); }
    const std::vector<std::string>& letters() const noexcept { return letters_; }

    std::optional<Symbol> index_of(std::string_view letter) const {
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (letters_[i] == letter)
                return static_cast<Symbol>(i);
        return std::nullopt;
    }

    /// True when every letter is a single character, i.e. text round-trips.
    bool single_char() const {
        return std::all_of(letters_.begin(), letters_.end(),
                           [](const std::string& l) { return l.size() == 1; });
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.letters_ == b.letters_; }

private:
    std::vector<std::string> letters_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

enum class DistanceKind { ExtHamming, Levenshtein };

inline std::string_view to_string(DistanceKind d) {
    return d == DistanceKind::ExtHamming ? "ext-hamming" : "levenshtein";
}

inline DistanceKind parse_distance_kind(std::string_view name) {
    if (name == "ext-hamming")
        return DistanceKind::ExtHamming;
    if (name == "levenshtein")
        return DistanceKind::Levenshtein;
    throw Error("unknown distance '" + std::string(name) + "' (expected ext-hamming or levenshtein)");
}

/// A finite string over an alphabet. The empty string plays the role of o.
class Str {
public:
    Str() = default;
    explicit Str(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}
    Str(AlphabetPtr alphabet, std::vector<Symbol> symbols)
        : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
        if (!alphabet_)
            throw Error("string requires an alphabet");
        for (Symbol s : symbols_)
            if (s >= alphabet_->size())
                throw Error("symbol index " + std::to_string(s) + " outside alphabet");
    }

    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    /// Same symbols and equal alphabets.
    friend bool operator==(const Str& a, const Str& b) {
        if (a.symbols_ != b.symbols_)
            return false;
        if (a.alphabet_ == b.alphabet_)
            return true;
        return a.alphabet_ && b.alphabet_ && *a.alphabet_ == *b.alphabet_;
    }

private:
    AlphabetPtr alphabet_;
    std::vector<Symbol> symbols_;
};

inline bool same_alphabet(const Str& a, const Str& b) {
    if (!a.alphabet() || !b.alphabet())
        return false;
    return a.alphabet() == b.alphabet() || *a.alphabet() == *b.alphabet();
}

inline void require_same_alphabet(const Str& a, const Str& b) {
    if (!same_alphabet(a, b))
        throw AlphabetMismatch();
}

/// Length first, then lexicographic by letter index.
inline bool shortlex_less(const Str& a, const Str& b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    return a.symbols() < b.symbols();
}

struct ShortlexLess {
    bool operator()(const Str& a, const Str& b) const { return shortlex_less(a, b); }
};

inline Str concat(const Str& s, const Str& t) {
    require_same_alphabet(s, t);
    std::vector<Symbol> out;
    out.reserve(s.size() + t.size());
    out.insert(out.end(), s.symbols().begin(), s.symbols().end());
    out.insert(out.end(), t.symbols().begin(), t.symbols().end());
    return Str(s.alphabet(), std::move(out));
}

/// Positions at which the e-padded sequences differ.
inline std::size_t ext_hamming(const Str& s, const Str& t) {
    require_same_alphabet(s, t);
    const std::size_t common = std::min(s.size(), t.size());
    std::size_t d = std::max(s.size(), t.size()) - common;
    for (std::size_t j = 0; j < common; ++j)
        d += s[j] != t[j];
    return d;
}

namespace detail {

inline std::size_t levenshtein_symbols(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    if (a.empty())
        return b.size();
    if (b.empty())
        return a.size();
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1] ? 1u : 0u)});
            diag = up;
        }
    }
    return row[b.size()];
}

} // namespace detail

inline std::size_t levenshtein(const Str& s, const Str& t) {
    require_same_alphabet(s, t);
    return detail::levenshtein_symbols(s.symbols(), t.symbols());
}

inline std::size_t distance(DistanceKind kind, const Str& s, const Str& t) {
    return kind == DistanceKind::ExtHamming ? ext_hamming(s, t) : levenshtein(s, t);
}

/// Map each character through a single-character alphabet. Positions in
/// error messages are 1-based.
inline Str parse(std::string_view text, const AlphabetPtr& alphabet) {
    if (!alphabet)
        throw Error("parse requires an alphabet");
    std::vector<Symbol> symbols;
    symbols.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto h = alphabet->index_of(text.substr(i, 1));
        if (!h)
            throw Error("character '" + std::string(1, text[i]) + "' at position " +
                        std::to_string(i + 1) + " is not in the alphabet");
        symbols.push_back(*h);
    }
    return Str(alphabet, std::move(symbols));
}

inline std::string to_text(const Str& s) {
    std::string out;
    for (Symbol h : s.symbols())
        out += s.alphabet()->letter(h);
    return out;
}

} // namespace strlap

#pragma once

#include "torsion/integer.hpp"

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace torsion {

/// Signed generator index: +j is generator j (1-based), -j its inverse.
using Letter = int;

/// A freely reduced word in the free group on the generators. The empty
/// word is the identity.
class Word {
public:
    Word() = default;

    /// Freely reduces `letters`. Letters are not range-checked here; use
    /// word_reduce() when the alphabet size is known.
    explicit Word(std::span<const Letter> letters) {
        letters_.reserve(letters.size());
        for (Letter l : letters) push_back(l);
    }
    Word(std::initializer_list<Letter> letters)
        : Word(std::span<const Letter>(letters.begin(), letters.size())) {}

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    Word inverse() const {
        Word w;
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
        return w;
    }

    /// Appends one letter, cancelling against the last letter if needed.
    void push_back(Letter l) {
        if (l == 0) throw InvalidArgument("word letter 0 is not a generator");
        if (!letters_.empty() && letters_.back() == -l)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    Word& operator*=(const Word& rhs) {
        for (Letter l : rhs.letters_) push_back(l);
        return *this;
    }
    friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& a, const Word& b) {
        // shortlex
        if (a.length() != b.length()) return a.length() <=> b.length();
        return a.letters_ <=> b.letters_;
    }

private:
    std::vector<Letter> letters_;
};

inline Word letter_word(Letter l) { return Word{l}; }

/// Freely reduces a raw letter sequence over `generator_count` generators.
inline Word word_reduce(std::span<const Letter> raw, int generator_count) {
    for (Letter l : raw)
        if (l == 0 || std::abs(l) > generator_count)
            throw InvalidArgument("letter " + std::to_string(l) + " outside generator range 1.." +
                                  std::to_string(generator_count));
    return Word(raw);
}

inline Word word_reduce(std::initializer_list<Letter> raw, int generator_count) {
    return word_reduce(std::span<const Letter>(raw.begin(), raw.size()), generator_count);
}

inline Word word_power(const Word& w, int exponent) {
    Word base = exponent < 0 ? w.inverse() : w;
    Word out;
    for (int i = 0; i < std::abs(exponent); ++i) out *= base;
    return out;
}

inline Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

/// "[1 2 -1]"; the identity is "[]".
inline std::string format_word(const Word& w) {
    std::string out = "[";
    for (std::size_t i = 0; i < w.length(); ++i) {
        if (i) out += ' ';
        out += std::to_string(w[i]);
    }
    out += ']';
    return out;
}

/// Parses the bracketed form produced by format_word(); commas are also
/// accepted as separators.
inline Word parse_word(std::string_view text, int generator_count) {
    auto open = text.find('[');
    auto close = text.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw InvalidArgument("malformed word: " + std::string(text));
    std::string body(text.substr(open + 1, close - open - 1));
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    std::vector<Letter> raw;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            raw.push_back(std::stoi(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw InvalidArgument("malformed letter '" + token + "' in word " + std::string(text));
        }
    }
    return word_reduce(raw, generator_count);
}

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (Letter l : w.letters()) {
            h ^= static_cast<std::size_t>(l + 0x9e37);
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace torsion

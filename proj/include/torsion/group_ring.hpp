#pragma once

#include "torsion/presentation.hpp"

#include <map>
#include <string>

namespace torsion {

/// Finite integer combination of freely reduced words, i.e. an element of
/// the integral group ring of the free group. Zero coefficients are never
/// stored.
class GroupRingElement {
public:
    using Terms = std::map<Word, Integer>;

    GroupRingElement() = default;
    explicit GroupRingElement(const Word& w, Integer coeff = 1) { add_term(w, std::move(coeff)); }

    static GroupRingElement one() { return GroupRingElement(Word{}); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Word& w, const Integer& coeff) {
        if (coeff == 0) return;
        auto [it, inserted] = terms_.try_emplace(w, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    GroupRingElement& operator+=(const GroupRingElement& rhs) {
        for (const auto& [w, c] : rhs.terms_) add_term(w, c);
        return *this;
    }
    GroupRingElement& operator-=(const GroupRingElement& rhs) {
        for (const auto& [w, c] : rhs.terms_) add_term(w, -c);
        return *this;
    }
    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
    GroupRingElement operator-() const {
        GroupRingElement out;
        for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
        return out;
    }

    friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
        GroupRingElement out;
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) out.add_term(wa * wb, ca * cb);
        return out;
    }
    friend GroupRingElement operator*(const Integer& s, const GroupRingElement& a) {
        GroupRingElement out;
        if (s == 0) return out;
        for (const auto& [w, c] : a.terms_) out.terms_.emplace(w, s * c);
        return out;
    }

    /// Sum of coefficients (image under the augmentation map).
    Integer augmentation() const {
        Integer s = 0;
        for (const auto& [w, c] : terms_) s += c;
        return s;
    }

    /// Sum of absolute values of the coefficients.
    Integer l1_norm() const {
        Integer s = 0;
        for (const auto& [w, c] : terms_) s += abs_value(c);
        return s;
    }

    friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

private:
    Terms terms_;
};

inline GroupRingElement gr_multiply(const GroupRingElement& a, const GroupRingElement& b) { return a * b; }

/// "2*[1 2] - 1*[]"; zero is "0".
inline std::string format_group_ring(const GroupRingElement& e) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : e.terms()) {
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        out += to_string(abs_value(c)) + "*" + format_word(w);
        first = false;
    }
    return out;
}

/// Fox free derivative d(relator)/d(generator), built letter by letter from
/// d(uv) = du + u dv with dx/dx = 1 and d(x^-1)/dx = -x^-1.
inline GroupRingElement fox_derivative(const Word& relator, int generator, int generator_count) {
    if (generator < 1 || generator > generator_count)
        throw InvalidArgument("fox_derivative: generator index out of range");
    GroupRingElement out;
    Word prefix;
    for (Letter l : relator.letters()) {
        if (l == generator) {
            out.add_term(prefix, 1);
        } else if (l == -generator) {
            out.add_term(prefix * letter_word(l), -1);
        }
        prefix.push_back(l);
    }
    return out;
}

}  // namespace torsion

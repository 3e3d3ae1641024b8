#pragma once

#include "torsion/presentation.hpp"

#include <boost/functional/hash.hpp>

#include <map>
#include <string>
#include <vector>

namespace torsion {

/// Canonical encoding of a group element. Two words have equal normal forms
/// exactly when they represent the same element of the family's group.
struct NormalForm {
    std::vector<Integer> coords;
    friend bool operator==(const NormalForm&, const NormalForm&) = default;
    friend auto operator<=>(const NormalForm&, const NormalForm&) = default;
};

struct NormalFormHash {
    std::size_t operator()(const NormalForm& nf) const {
        std::size_t seed = nf.coords.size();
        for (const Integer& c : nf.coords) boost::hash_combine(seed, boost::multiprecision::hash_value(c));
        return seed;
    }
};

enum class FamilyKind { FreeAbelian, Heisenberg, BaumslagSolitar, Lamplighter };

/// One of the built-in groups together with a standard presentation and a
/// faithful normal form:
///   FreeAbelian(d)     Z^d                      integer d-vectors
///   Heisenberg         <x,y,z | [x,y]z^-1, [x,z], [y,z]>   (a, b, c) for [[1,a,c],[0,1,b],[0,0,1]]
///   BaumslagSolitar(m) <a,t | t a t^-1 a^-m>    affine maps x -> m^k x + b, b in Z[1/m]
///   Lamplighter(p)     C_p wr Z, generators a (lamp at 0) and t (shift)
///
/// The lamplighter group is not finitely presented. Its presentation here is
/// the truncation <a, t | a^p, [t a t^-1, a]>; homology of finite-index
/// subgroups is always computed for that presentation, and the normal form
/// (which sees the lamplighter group itself) is used only for Cayley-graph
/// geometry.
class GroupFamily {
public:
    static GroupFamily free_abelian(int d) {
        if (d < 1) throw InvalidArgument("FreeAbelian(d) requires d >= 1");
        std::vector<Word> rel;
        for (int i = 1; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j) rel.push_back(commutator(Word{i}, Word{j}));
        return GroupFamily(FamilyKind::FreeAbelian, d, Presentation(d, std::move(rel)));
    }

    static GroupFamily heisenberg() {
        const Word x{1}, y{2}, z{3};
        return GroupFamily(FamilyKind::Heisenberg, 0,
                           Presentation(3, {commutator(x, y) * z.inverse(), commutator(x, z), commutator(y, z)}));
    }

    static GroupFamily baumslag_solitar(int m) {
        if (m < 2) throw InvalidArgument("BaumslagSolitar(m) requires m >= 2");
        const Word a{1}, t{2};
        return GroupFamily(FamilyKind::BaumslagSolitar, m,
                           Presentation(2, {t * a * t.inverse() * word_power(a, -m)}));
    }

    static GroupFamily lamplighter(int p) {
        if (!is_prime(p)) throw InvalidArgument("Lamplighter(p) requires p prime");
        const Word a{1}, t{2};
        return GroupFamily(FamilyKind::Lamplighter, p,
                           Presentation(2, {word_power(a, p), commutator(t * a * t.inverse(), a)}));
    }

    FamilyKind kind() const { return kind_; }
    int parameter() const { return param_; }
    const Presentation& presentation() const { return presentation_; }
    int generator_count() const { return presentation_.generator_count(); }
    /// False when the presentation only defines a group mapping onto this one.
    bool presents_group() const { return kind_ != FamilyKind::Lamplighter; }

    std::string name() const {
        switch (kind_) {
            case FamilyKind::FreeAbelian: return "FreeAbelian(" + std::to_string(param_) + ")";
            case FamilyKind::Heisenberg: return "Heisenberg";
            case FamilyKind::BaumslagSolitar: return "BaumslagSolitar(" + std::to_string(param_) + ")";
            case FamilyKind::Lamplighter: return "Lamplighter(" + std::to_string(param_) + ")";
        }
        return {};
    }

    NormalForm identity() const {
        switch (kind_) {
            case FamilyKind::FreeAbelian: return NormalForm{std::vector<Integer>(param_, 0)};
            case FamilyKind::Heisenberg: return NormalForm{{0, 0, 0}};
            case FamilyKind::BaumslagSolitar: return NormalForm{{0, 0, 0}};  // k, numerator, denominator exponent
            case FamilyKind::Lamplighter: return NormalForm{{0}};            // shift, then (position, value) pairs
        }
        return {};
    }

    /// Right multiplication of an element by a single generator letter.
    NormalForm apply(NormalForm nf, Letter l) const {
        const int g = std::abs(l);
        const int sign = l > 0 ? 1 : -1;
        if (g < 1 || g > generator_count()) throw InvalidArgument("letter outside family alphabet");
        auto& c = nf.coords;
        switch (kind_) {
            case FamilyKind::FreeAbelian:
                c[g - 1] += sign;
                break;
            case FamilyKind::Heisenberg:
                // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')
                if (g == 1) c[0] += sign;
                else if (g == 2) {
                    c[2] += c[0] * sign;
                    c[1] += sign;
                } else c[2] += sign;
                break;
            case FamilyKind::BaumslagSolitar:
                if (g == 2) c[0] += sign;
                else bs_add_power(c, sign);
                break;
            case FamilyKind::Lamplighter:
                if (g == 2) c[0] += sign;
                else lamp_toggle(c, sign);
                break;
        }
        return nf;
    }

    NormalForm normal_form(const Word& w) const {
        NormalForm nf = identity();
        for (Letter l : w.letters()) nf = apply(std::move(nf), l);
        return nf;
    }

    bool is_identity(const Word& w) const { return normal_form(w) == identity(); }

    /// A word whose normal form is `nf`; used to keep products of long
    /// words short.
    Word canonical_word(const NormalForm& nf) const {
        const auto& c = nf.coords;
        auto as_int = [](const Integer& v) { return v.convert_to<long>(); };
        Word w;
        auto append_power = [&w](Letter g, long e) {
            for (long i = 0; i < std::labs(e); ++i) w.push_back(e > 0 ? g : -g);
        };
        switch (kind_) {
            case FamilyKind::FreeAbelian:
                for (int j = 0; j < param_; ++j) append_power(j + 1, as_int(c[j]));
                break;
            case FamilyKind::Heisenberg: {
                // x^a y^b = (a, b, ab)
                const long a = as_int(c[0]), b = as_int(c[1]);
                append_power(1, a);
                append_power(2, b);
                append_power(3, as_int(c[2]) - a * b);
                break;
            }
            case FamilyKind::BaumslagSolitar: {
                // t^-e a^num t^(e+k) = (k, num / m^e)
                const long k = as_int(c[0]), e = as_int(c[2]);
                append_power(2, -e);
                append_power(1, as_int(c[1]));
                append_power(2, e + k);
                break;
            }
            case FamilyKind::Lamplighter: {
                long pos = 0;
                for (std::size_t i = 1; i + 1 < c.size(); i += 2) {
                    const long x = as_int(c[i]);
                    long v = as_int(c[i + 1]);
                    if (2 * v > param_) v -= param_;
                    append_power(2, x - pos);
                    append_power(1, v);
                    pos = x;
                }
                append_power(2, as_int(c[0]) - pos);
                break;
            }
        }
        return w;
    }

private:
    GroupFamily(FamilyKind kind, int param, Presentation p)
        : kind_(kind), param_(param), presentation_(std::move(p)) {}

    // b <- b + sign * m^k for the affine element (k, num / m^e).
    void bs_add_power(std::vector<Integer>& c, int sign) const {
        const Integer m = param_;
        const long k = c[0].convert_to<long>();
        long e = c[2].convert_to<long>();
        Integer num = c[1];
        if (k >= 0) {
            num += sign * ipow(m, static_cast<std::uint64_t>(k + e));
        } else {
            const long need = -k;
            if (need > e) {
                num *= ipow(m, static_cast<std::uint64_t>(need - e));
                e = need;
            }
            num += sign * ipow(m, static_cast<std::uint64_t>(e + k));
        }
        while (e > 0 && num % m == 0) {
            num /= m;
            --e;
        }
        if (num == 0) e = 0;
        c[1] = num;
        c[2] = e;
    }

    // Changes the lamp at the current shift position by sign (mod p).
    void lamp_toggle(std::vector<Integer>& c, int sign) const {
        std::map<Integer, Integer> lamps;
        for (std::size_t i = 1; i + 1 < c.size(); i += 2) lamps.emplace(c[i], c[i + 1]);
        Integer& v = lamps[c[0]];
        v = ((v + sign) % param_ + param_) % param_;
        Integer shift = c[0];
        c.assign(1, shift);
        for (const auto& [pos, val] : lamps) {
            if (val == 0) continue;
            c.push_back(pos);
            c.push_back(val);
        }
    }

    FamilyKind kind_;
    int param_;
    Presentation presentation_;
};

/// Named constructor used by the CLI; name is one of free_abelian,
/// heisenberg, baumslag_solitar, lamplighter.
inline GroupFamily builtin_family(const std::string& name, int param = 0) {
    if (name == "free_abelian") return GroupFamily::free_abelian(param);
    if (name == "heisenberg") return GroupFamily::heisenberg();
    if (name == "baumslag_solitar") return GroupFamily::baumslag_solitar(param);
    if (name == "lamplighter") return GroupFamily::lamplighter(param);
    throw InvalidArgument("unknown group family '" + name + "'");
}

}  // namespace torsion

#pragma once

#include "torsion/presentation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace torsion {

class RelatorViolation : public Error {
public:
    using Error::Error;
};

class NotTransitive : public Error {
public:
    using Error::Error;
};

using Permutation = std::vector<std::uint32_t>;

/// Transitive right action of a finitely presented group on {0..N-1},
/// i.e. the coset space H\G with H the stabilizer of 0. A word acts letter
/// by letter from the left: c . (x1 x2 ... xk) = (((c . x1) . x2) ... ) . xk.
class FiniteAction {
public:
    FiniteAction() = default;

    /// Validates `images` (one permutation per generator) against the
    /// presentation: each must be a bijection, every relator must act as
    /// the identity, and the action must be transitive.
    FiniteAction(const Presentation& presentation, std::vector<Permutation> images)
        : images_(std::move(images)) {
        if (static_cast<int>(images_.size()) != presentation.generator_count())
            throw InvalidArgument("need one permutation per generator");
        degree_ = images_.empty() ? 0 : images_.front().size();
        if (degree_ == 0) throw InvalidArgument("action degree must be positive");
        inverses_.resize(images_.size());
        for (std::size_t g = 0; g < images_.size(); ++g) {
            const Permutation& p = images_[g];
            if (p.size() != degree_) throw InvalidArgument("permutations must all have the same degree");
            Permutation inv(degree_, UINT32_MAX);
            for (std::size_t c = 0; c < degree_; ++c) {
                if (p[c] >= degree_ || inv[p[c]] != UINT32_MAX)
                    throw InvalidArgument("image of generator " + std::to_string(g + 1) + " is not a bijection");
                inv[p[c]] = static_cast<std::uint32_t>(c);
            }
            inverses_[g] = std::move(inv);
        }
        for (const Word& r : presentation.relators())
            for (std::size_t c = 0; c < degree_; ++c)
                if (act(c, r) != c)
                    throw RelatorViolation("relator " + format_word(r) + " moves point " + std::to_string(c));
        std::vector<bool> seen(degree_, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t c = stack.back();
            stack.pop_back();
            for (std::size_t g = 0; g < images_.size(); ++g)
                for (std::size_t nb : {std::size_t(images_[g][c]), std::size_t(inverses_[g][c])})
                    if (!seen[nb]) {
                        seen[nb] = true;
                        ++reached;
                        stack.push_back(nb);
                    }
        }
        if (reached != degree_)
            throw NotTransitive("action reaches " + std::to_string(reached) + " of " + std::to_string(degree_) +
                                " points");
        generator_count_ = presentation.generator_count();
    }

    std::size_t degree() const { return degree_; }
    int generator_count() const { return generator_count_; }
    const std::vector<Permutation>& images() const { return images_; }

    std::size_t act(std::size_t c, Letter l) const {
        return l > 0 ? images_[l - 1][c] : inverses_[-l - 1][c];
    }
    std::size_t act(std::size_t c, const Word& w) const {
        for (Letter l : w.letters()) c = act(c, l);
        return c;
    }

    /// Number of points fixed by w.
    std::size_t fixed_points(const Word& w) const {
        std::size_t n = 0;
        for (std::size_t c = 0; c < degree_; ++c)
            if (act(c, w) == c) ++n;
        return n;
    }

private:
    std::size_t degree_ = 0;
    int generator_count_ = 0;
    std::vector<Permutation> images_;
    std::vector<Permutation> inverses_;
};

inline FiniteAction action_from_images(const Presentation& p, std::vector<Permutation> images) {
    return FiniteAction(p, std::move(images));
}

}  // namespace torsion

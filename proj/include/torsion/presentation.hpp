#pragma once

#include "torsion/word.hpp"

#include <string>
#include <vector>

namespace torsion {

/// A finite presentation <S | R>. Relators are freely reduced and nonempty;
/// max_relator_length() is the bound k that every torsion estimate uses.
class Presentation {
public:
    Presentation() = default;
    Presentation(int generator_count, std::vector<Word> relators)
        : generator_count_(generator_count), relators_(std::move(relators)) {
        if (generator_count_ < 1) throw InvalidArgument("presentation needs at least one generator");
        for (const Word& r : relators_) {
            if (r.empty()) throw InvalidArgument("relators must be nonempty after free reduction");
            for (Letter l : r.letters())
                if (std::abs(l) > generator_count_)
                    throw InvalidArgument("relator " + format_word(r) + " uses an unknown generator");
            max_relator_length_ = std::max(max_relator_length_, r.length());
        }
    }

    int generator_count() const { return generator_count_; }
    const std::vector<Word>& relators() const { return relators_; }
    std::size_t max_relator_length() const { return max_relator_length_; }

    friend bool operator==(const Presentation&, const Presentation&) = default;

private:
    int generator_count_ = 1;
    std::vector<Word> relators_;
    std::size_t max_relator_length_ = 0;
};

/// All generators and their inverses in the fixed scan order +1, -1, +2, -2, ...
inline std::vector<Letter> signed_alphabet(int generator_count) {
    std::vector<Letter> out;
    out.reserve(2 * static_cast<std::size_t>(generator_count));
    for (int j = 1; j <= generator_count; ++j) {
        out.push_back(j);
        out.push_back(-j);
    }
    return out;
}

}  // namespace torsion

#pragma once

#include "torsion/families.hpp"
#include "torsion/finite_action.hpp"
#include "torsion/group_ring.hpp"
#include "torsion/int_matrix.hpp"

#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace torsion {

/// Matrix with group-ring entries; entry (i, j) is the coefficient of the
/// i-th (d-1)-cell in the boundary of the j-th d-cell.
struct GroupRingMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<GroupRingElement> entries;  // row-major

    GroupRingMatrix() = default;
    GroupRingMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    GroupRingElement& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const GroupRingElement& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

/// Free ZG-chain complex C_top -> ... -> C_0 of the universal cover.
/// boundaries[d] is the matrix of delta_d : C_d -> C_{d-1}; boundaries[0]
/// is the empty 0 x ranks[0] matrix.
struct ChainComplexSpec {
    int generator_count = 1;
    std::vector<std::size_t> ranks;
    std::vector<GroupRingMatrix> boundaries;
    /// Whether H_n of the universal cover is known to vanish, per degree
    /// (declared by whoever builds the complex, never certified here).
    std::vector<bool> acyclic_cover;

    std::size_t top_degree() const { return ranks.empty() ? 0 : ranks.size() - 1; }
};

/// Composite delta_{d-1} o delta_d as a group-ring matrix over the free
/// group: entry (k, j) = sum_i delta_d(i, j) * delta_{d-1}(k, i).
inline GroupRingMatrix compose(const GroupRingMatrix& lower, const GroupRingMatrix& upper) {
    if (lower.cols != upper.rows) throw InvalidArgument("compose: dimension mismatch");
    GroupRingMatrix out(lower.rows, upper.cols);
    for (std::size_t k = 0; k < lower.rows; ++k)
        for (std::size_t j = 0; j < upper.cols; ++j)
            for (std::size_t i = 0; i < upper.rows; ++i)
                if (!upper.at(i, j).is_zero() && !lower.at(k, i).is_zero()) out.at(k, j) += upper.at(i, j) * lower.at(k, i);
    return out;
}

/// Image of a free-group-ring element in ZG, keyed by normal form.
inline std::map<NormalForm, Integer> evaluate_in_group(const GroupRingElement& e, const GroupFamily& family) {
    std::map<NormalForm, Integer> out;
    for (const auto& [w, c] : e.terms()) {
        auto it = out.try_emplace(family.normal_form(w), 0).first;
        it->second += c;
        if (it->second == 0) out.erase(it);
    }
    return out;
}

/// Checks delta_{d-1} o delta_d = 0 in ZG for every d, using the family's
/// normal form for equality of group elements.
inline void verify_complex(const ChainComplexSpec& cx, const GroupFamily& family) {
    for (std::size_t d = 2; d <= cx.top_degree(); ++d) {
        const GroupRingMatrix prod = compose(cx.boundaries[d - 1], cx.boundaries[d]);
        for (const auto& e : prod.entries)
            if (!evaluate_in_group(e, family).empty())
                throw InvalidArgument("boundary composite delta_" + std::to_string(d - 1) + " o delta_" +
                                      std::to_string(d) + " is nonzero in the group ring");
    }
}

/// Presentation 2-complex: one vertex, an edge per generator, a disc per
/// relator. delta_1 has entries (x_j - 1) and delta_2 is the Fox Jacobian.
/// The relation delta_1 o delta_2 = 0 is certified through the fundamental
/// identity sum_j (dr/dx_j)(x_j - 1) = r - 1 in the free group ring.
inline ChainComplexSpec presentation_complex(const Presentation& p) {
    const std::size_t gens = static_cast<std::size_t>(p.generator_count());
    const std::size_t rels = p.relators().size();
    ChainComplexSpec cx;
    cx.generator_count = p.generator_count();
    cx.ranks = {1, gens, rels};
    cx.boundaries.emplace_back(0, 1);
    GroupRingMatrix d1(1, gens);
    for (std::size_t j = 0; j < gens; ++j)
        d1.at(0, j) = GroupRingElement(Word{static_cast<Letter>(j + 1)}) - GroupRingElement::one();
    GroupRingMatrix d2(gens, rels);
    for (std::size_t r = 0; r < rels; ++r)
        for (std::size_t j = 0; j < gens; ++j)
            d2.at(j, r) = fox_derivative(p.relators()[r], static_cast<int>(j + 1), p.generator_count());
    const GroupRingMatrix comp = compose(d1, d2);
    for (std::size_t r = 0; r < rels; ++r)
        if (comp.at(0, r) != GroupRingElement(p.relators()[r]) - GroupRingElement::one())
            throw Error("fundamental identity failed for relator " + format_word(p.relators()[r]));
    cx.boundaries.push_back(std::move(d1));
    cx.boundaries.push_back(std::move(d2));
    // The universal cover of a presentation complex is simply connected.
    cx.acyclic_cover = {false, true, false};
    return cx;
}

/// Integer chain complex of the cover with the given coset space.
struct InducedComplex {
    std::vector<std::size_t> ranks;      // cells per degree
    std::vector<IntMatrix> boundaries;   // boundaries[d] : C_d -> C_{d-1}
    std::size_t index = 1;
};

/// Z[H\G] (x)_ZG C: cell (j, c) is the j-th orbit of cells over coset c,
/// numbered j*N + c, and its boundary picks up coefficient a at row
/// (i, c.w) for each term a*w of delta(i, j).
inline InducedComplex induce(const ChainComplexSpec& cx, const FiniteAction& action) {
    if (action.generator_count() != cx.generator_count)
        throw InvalidArgument("induce: the action and the complex use different generator sets");
    const std::size_t N = action.degree();
    InducedComplex out;
    out.index = N;
    for (std::size_t r : cx.ranks) out.ranks.push_back(r * N);
    out.boundaries.emplace_back(0, out.ranks.empty() ? 0 : out.ranks[0]);
    for (std::size_t d = 1; d <= cx.top_degree(); ++d) {
        const GroupRingMatrix& D = cx.boundaries[d];
        IntMatrix B(out.ranks[d - 1], out.ranks[d]);
        for (std::size_t i = 0; i < D.rows; ++i)
            for (std::size_t j = 0; j < D.cols; ++j)
                for (const auto& [w, coeff] : D.at(i, j).terms())
                    for (std::size_t c = 0; c < N; ++c) B.add(i * N + action.act(c, w), j * N + c, coeff);
        out.boundaries.push_back(std::move(B));
    }
    return out;
}

// Fixture text format:
//
//   generators 2
//   ranks 1 2 1
//   acyclic 1            # optional: degrees whose cover homology vanishes
//   (1, 0, 0): 1*[1] - 1*[]
//   (2, 0, 0): 1*[] - 1*[1 2 -1]
//
// Each entry line gives (degree, row, col) of delta_degree and a sum of
// coeff*word terms; words use signed 1-based generator indices.

inline void write_complex(std::ostream& out, const ChainComplexSpec& cx) {
    out << "generators " << cx.generator_count << '\n' << "ranks";
    for (std::size_t r : cx.ranks) out << ' ' << r;
    out << '\n';
    bool any = false;
    for (std::size_t d = 0; d < cx.acyclic_cover.size(); ++d)
        if (cx.acyclic_cover[d]) {
            out << (any ? " " : "acyclic ") << d;
            any = true;
        }
    if (any) out << '\n';
    for (std::size_t d = 1; d <= cx.top_degree(); ++d)
        for (std::size_t i = 0; i < cx.boundaries[d].rows; ++i)
            for (std::size_t j = 0; j < cx.boundaries[d].cols; ++j)
                if (!cx.boundaries[d].at(i, j).is_zero())
                    out << '(' << d << ", " << i << ", " << j << "): " << format_group_ring(cx.boundaries[d].at(i, j))
                        << '\n';
}

inline GroupRingElement parse_group_ring(const std::string& text, int generator_count) {
    GroupRingElement out;
    static const std::regex term(R"(\s*([+-]?)\s*(\d+)\s*\*\s*(\[[^\]]*\])\s*)");
    std::string rest = text;
    if (rest.find_first_not_of(" \t\r") == std::string::npos || rest == "0") return out;
    std::smatch m;
    bool first = true;
    while (!rest.empty() && rest.find_first_not_of(" \t\r") != std::string::npos) {
        if (!std::regex_search(rest, m, term, std::regex_constants::match_continuous))
            throw InvalidArgument("malformed group ring element: '" + text + "'");
        if (!first && m[1].str().empty()) throw InvalidArgument("missing sign between terms in '" + text + "'");
        Integer c(m[2].str());
        if (m[1].str() == "-") c = -c;
        out.add_term(parse_word(m[3].str(), generator_count), c);
        rest = m.suffix().str();
        first = false;
    }
    return out;
}

inline ChainComplexSpec read_complex(std::istream& in) {
    ChainComplexSpec cx;
    bool have_gens = false, have_ranks = false;
    std::string line;
    static const std::regex entry(R"(\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*:(.*))");
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        std::smatch m;
        if (head == "generators") {
            if (!(ls >> cx.generator_count) || cx.generator_count < 1) throw InvalidArgument("bad generators line");
            have_gens = true;
        } else if (head == "ranks") {
            std::size_t r;
            while (ls >> r) cx.ranks.push_back(r);
            if (cx.ranks.empty()) throw InvalidArgument("ranks line lists no degrees");
            cx.boundaries.clear();
            cx.boundaries.emplace_back(0, cx.ranks[0]);
            for (std::size_t d = 1; d < cx.ranks.size(); ++d) cx.boundaries.emplace_back(cx.ranks[d - 1], cx.ranks[d]);
            cx.acyclic_cover.assign(cx.ranks.size(), false);
            have_ranks = true;
        } else if (head == "acyclic") {
            if (!have_ranks) throw InvalidArgument("acyclic line before ranks");
            std::size_t d;
            while (ls >> d) {
                if (d >= cx.ranks.size()) throw InvalidArgument("acyclic degree out of range");
                cx.acyclic_cover[d] = true;
            }
        } else if (std::regex_match(line, m, entry)) {
            if (!have_gens || !have_ranks) throw InvalidArgument("boundary entry before generators/ranks lines");
            const std::size_t d = std::stoul(m[1]), i = std::stoul(m[2]), j = std::stoul(m[3]);
            if (d < 1 || d > cx.top_degree() || i >= cx.boundaries[d].rows || j >= cx.boundaries[d].cols)
                throw InvalidArgument("boundary entry out of range: " + line);
            cx.boundaries[d].at(i, j) += parse_group_ring(m[4].str(), cx.generator_count);
        } else {
            throw InvalidArgument("unrecognised complex line: " + line);
        }
    }
    if (!have_gens || !have_ranks) throw InvalidArgument("complex fixture needs generators and ranks lines");
    return cx;
}

}  // namespace torsion

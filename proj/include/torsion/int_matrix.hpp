#pragma once

#include "torsion/integer.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace torsion {

/// Sparse m x l matrix of arbitrary-precision integers, stored by column.
class IntMatrix {
public:
    using Column = std::map<std::size_t, Integer>;

    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

    static IntMatrix from_dense(const std::vector<std::vector<long long>>& dense) {
        IntMatrix m(dense.size(), dense.empty() ? 0 : dense.front().size());
        for (std::size_t r = 0; r < dense.size(); ++r) {
            if (dense[r].size() != m.cols()) throw InvalidArgument("ragged dense matrix");
            for (std::size_t c = 0; c < dense[r].size(); ++c) m.set(r, c, dense[r][c]);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    const Column& column(std::size_t c) const { return columns_.at(c); }

    Integer get(std::size_t r, std::size_t c) const {
        check(r, c);
        auto it = columns_[c].find(r);
        return it == columns_[c].end() ? Integer(0) : it->second;
    }

    void set(std::size_t r, std::size_t c, const Integer& v) {
        check(r, c);
        if (v == 0) columns_[c].erase(r);
        else columns_[c][r] = v;
    }

    void add(std::size_t r, std::size_t c, const Integer& v) {
        check(r, c);
        if (v == 0) return;
        auto [it, inserted] = columns_[c].try_emplace(r, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) columns_[c].erase(it);
        }
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& col : columns_) n += col.size();
        return n;
    }

    bool is_zero() const { return nonzeros() == 0; }

    IntMatrix transpose() const {
        IntMatrix t(cols(), rows());
        for (std::size_t c = 0; c < cols(); ++c)
            for (const auto& [r, v] : columns_[c]) t.columns_[r].emplace(c, v);
        return t;
    }

    std::vector<std::vector<Integer>> to_dense() const {
        std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols(), 0));
        for (std::size_t c = 0; c < cols(); ++c)
            for (const auto& [r, v] : columns_[c]) d[r][c] = v;
        return d;
    }

    /// Largest l1-norm of a column; 0 for the empty or zero matrix.
    Integer max_column_l1() const {
        Integer best = 0;
        for (const auto& col : columns_) {
            Integer s = 0;
            for (const auto& [r, v] : col) s += abs_value(v);
            if (s > best) best = s;
        }
        return best;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols() != b.rows()) throw InvalidArgument("matrix product dimension mismatch");
        IntMatrix out(a.rows(), b.cols());
        for (std::size_t c = 0; c < b.cols(); ++c)
            for (const auto& [k, bv] : b.columns_[c])
                for (const auto& [r, av] : a.columns_[k]) out.add(r, c, av * bv);
        return out;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols()) throw InvalidArgument("matrix index out of range");
    }

    std::size_t rows_ = 0;
    std::vector<Column> columns_;
};

/// Plain-text exchange format: a header line "m l" followed by one
/// "row col value" line per nonzero entry (0-based, row-major order).
inline void write_matrix(std::ostream& out, const IntMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    std::map<std::pair<std::size_t, std::size_t>, Integer> sorted;
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c)) sorted.emplace(std::make_pair(r, c), v);
    for (const auto& [rc, v] : sorted) out << rc.first << ' ' << rc.second << ' ' << v << '\n';
}

inline IntMatrix read_matrix(std::istream& in) {
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw InvalidArgument("matrix text: missing 'm l' header");
    std::istringstream header(line);
    long long m = -1, l = -1;
    if (!(header >> m >> l) || m < 0 || l < 0) throw InvalidArgument("matrix text: bad header '" + line + "'");
    IntMatrix out(static_cast<std::size_t>(m), static_cast<std::size_t>(l));
    while (next_line()) {
        std::istringstream row(line);
        long long r = -1, c = -1;
        std::string value;
        if (!(row >> r >> c >> value) || r < 0 || c < 0 || r >= m || c >= l)
            throw InvalidArgument("matrix text: bad entry '" + line + "'");
        try {
            out.add(static_cast<std::size_t>(r), static_cast<std::size_t>(c), Integer(value));
        } catch (const std::runtime_error&) {
            throw InvalidArgument("matrix text: bad value '" + value + "'");
        }
    }
    return out;
}

}  // namespace torsion

#pragma once

#include "torsion/int_matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>

namespace torsion {

/// Invariant factors d_1 | d_2 | ... | d_r of an m x l integer matrix; the
/// cokernel Z^m / (column span) is Z^(m - r) + sum_j Z/d_j.
struct SnfResult {
    std::vector<Integer> invariant_factors;
    std::size_t rank = 0;
    Integer torsion = 1;
    std::size_t cokernel_free_rank = 0;

    /// Factors different from 1.
    std::vector<Integer> nontrivial_factors() const {
        std::vector<Integer> out;
        for (const auto& d : invariant_factors)
            if (d != 1) out.push_back(d);
        return out;
    }
};

struct SnfOptions {
    /// Switch to dense elimination once the active block is this full.
    double dense_fill_threshold = 0.30;
    /// Blocks smaller than this many cells never switch.
    std::size_t dense_min_cells = 1024;
};

namespace detail {

/// a = q*b + r with |r| <= |b|/2.
inline Integer nearest_quotient(const Integer& a, const Integer& b) {
    Integer q = a / b;
    Integer r = a - q * b;
    Integer twice = 2 * abs_value(r);
    if (twice > abs_value(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
    return q;
}

/// Turns a list of diagonal entries into a divisibility chain.
inline std::vector<Integer> normalize_diagonal(std::vector<Integer> diag) {
    std::vector<Integer> ones, rest;
    for (auto& d : diag) {
        d = abs_value(d);
        (d == 1 ? ones : rest).push_back(std::move(d));
    }
    for (std::size_t i = 0; i < rest.size(); ++i)
        for (std::size_t j = i + 1; j < rest.size(); ++j) {
            if (rest[j] % rest[i] == 0) continue;
            Integer g = gcd(rest[i], rest[j]);
            Integer l = rest[i] / g * rest[j];
            rest[i] = std::move(g);
            rest[j] = std::move(l);
        }
    ones.insert(ones.end(), rest.begin(), rest.end());
    return ones;
}

struct Entry {
    std::uint32_t col;
    Integer val;
};
using SparseRow = std::vector<Entry>;  // sorted by col

inline const Integer* find_entry(const SparseRow& row, std::uint32_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const Entry& e, std::uint32_t c) { return e.col < c; });
    return (it != row.end() && it->col == col) ? &it->val : nullptr;
}

inline void dense_eliminate(std::vector<std::vector<Integer>> a, std::vector<Integer>& diag) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::size_t done = 0;
    while (done < rows && done < cols) {
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        Integer best;
        for (std::size_t r = done; r < rows; ++r)
            for (std::size_t c = done; c < cols; ++c)
                if (a[r][c] != 0 && (!pivot || abs_value(a[r][c]) < best)) {
                    best = abs_value(a[r][c]);
                    pivot = {r, c};
                    if (best == 1) goto found;
                }
    found:
        if (!pivot) break;
        std::swap(a[done], a[pivot->first]);
        for (auto& row : a) std::swap(row[done], row[pivot->second]);
        for (;;) {
            const Integer v = a[done][done];
            std::optional<std::pair<std::size_t, std::size_t>> smaller;
            Integer smallest = abs_value(v);
            for (std::size_t r = done + 1; r < rows; ++r) {
                if (a[r][done] == 0) continue;
                Integer q = nearest_quotient(a[r][done], v);
                for (std::size_t c = done; c < cols; ++c)
                    if (a[done][c] != 0) a[r][c] -= q * a[done][c];
                if (a[r][done] != 0 && abs_value(a[r][done]) < smallest) {
                    smallest = abs_value(a[r][done]);
                    smaller = {r, done};
                }
            }
            if (!smaller) {
                for (std::size_t c = done + 1; c < cols; ++c) {
                    if (a[done][c] == 0) continue;
                    Integer q = nearest_quotient(a[done][c], v);
                    for (std::size_t r = done; r < rows; ++r)
                        if (a[r][done] != 0) a[r][c] -= q * a[r][done];
                    if (a[done][c] != 0 && abs_value(a[done][c]) < smallest) {
                        smallest = abs_value(a[done][c]);
                        smaller = {done, c};
                    }
                }
            }
            if (!smaller) break;
            std::swap(a[done], a[smaller->first]);
            for (auto& row : a) std::swap(row[done], row[smaller->second]);
        }
        diag.push_back(abs_value(a[done][done]));
        ++done;
    }
}

/// Sparse elimination state: rows with sorted entries plus, per column, the
/// set of rows holding a nonzero.
class SparseEliminator {
public:
    SparseEliminator(const IntMatrix& m, SnfOptions opts) : opts_(opts), rows_(m.rows()), cols_(m.cols()) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (const auto& [r, v] : m.column(c)) {
                rows_[r].push_back({static_cast<std::uint32_t>(c), v});
                cols_[c].insert(static_cast<std::uint32_t>(r));
                ++nnz_;
            }
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (!rows_[r].empty()) active_rows_.insert(static_cast<std::uint32_t>(r));
    }

    std::vector<Integer> run() {
        std::vector<Integer> diag;
        while (!active_rows_.empty()) {
            if (should_densify()) {
                densify(diag);
                break;
            }
            auto [p, q] = choose_pivot();
            eliminate(p, q, diag);
        }
        return diag;
    }

private:
    std::size_t active_cols() const {
        std::size_t n = 0;
        for (const auto& c : cols_)
            if (!c.empty()) ++n;
        return n;
    }

    bool should_densify() const {
        const double cells = static_cast<double>(active_rows_.size()) * static_cast<double>(active_cols());
        return cells >= static_cast<double>(opts_.dense_min_cells) &&
               static_cast<double>(nnz_) > opts_.dense_fill_threshold * cells;
    }

    void densify(std::vector<Integer>& diag) {
        std::vector<std::uint32_t> col_ids;
        for (std::size_t c = 0; c < cols_.size(); ++c)
            if (!cols_[c].empty()) col_ids.push_back(static_cast<std::uint32_t>(c));
        std::vector<std::vector<Integer>> dense;
        for (std::uint32_t r : active_rows_) {
            std::vector<Integer> row(col_ids.size(), 0);
            for (const Entry& e : rows_[r]) {
                auto pos = std::lower_bound(col_ids.begin(), col_ids.end(), e.col) - col_ids.begin();
                row[pos] = e.val;
            }
            dense.push_back(std::move(row));
        }
        dense_eliminate(std::move(dense), diag);
    }

    // Unit entries first, ranked by Markowitz cost; otherwise the smallest
    // absolute value.
    std::pair<std::uint32_t, std::uint32_t> choose_pivot() const {
        std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        bool best_unit = false;
        Integer best_abs;
        for (std::uint32_t r : active_rows_) {
            const auto& row = rows_[r];
            const std::size_t row_cost = row.size() - 1;
            for (const Entry& e : row) {
                const bool unit = e.val == 1 || e.val == -1;
                const std::size_t cost = row_cost * (cols_[e.col].size() - 1);
                if (unit) {
                    if (!best_unit || cost < best_cost) {
                        best = {r, e.col};
                        best_cost = cost;
                        best_unit = true;
                        if (cost == 0) return *best;
                    }
                } else if (!best_unit) {
                    Integer a = abs_value(e.val);
                    if (!best || a < best_abs || (a == best_abs && cost < best_cost)) {
                        best = {r, e.col};
                        best_abs = std::move(a);
                        best_cost = cost;
                    }
                }
            }
        }
        return *best;
    }

    // row[target] -= q * row[source]
    void axpy(std::uint32_t target, std::uint32_t source, const Integer& q) {
        SparseRow merged;
        const SparseRow& a = rows_[target];
        const SparseRow& b = rows_[source];
        merged.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
                merged.push_back(a[i++]);
            } else if (i == a.size() || b[j].col < a[i].col) {
                merged.push_back({b[j].col, -q * b[j].val});
                cols_[b[j].col].insert(target);
                ++nnz_;
                ++j;
            } else {
                Integer v = a[i].val - q * b[j].val;
                if (v != 0) merged.push_back({a[i].col, std::move(v)});
                else {
                    cols_[a[i].col].erase(target);
                    --nnz_;
                }
                ++i;
                ++j;
            }
        }
        rows_[target] = std::move(merged);
        if (rows_[target].empty()) active_rows_.erase(target);
    }

    void eliminate(std::uint32_t p, std::uint32_t q, std::vector<Integer>& diag) {
        for (;;) {
            const Integer v = *find_entry(rows_[p], q);
            // clear column q with row operations
            std::optional<std::uint32_t> smaller_row;
            Integer smallest = abs_value(v);
            std::vector<std::uint32_t> others(cols_[q].begin(), cols_[q].end());
            for (std::uint32_t r : others) {
                if (r == p) continue;
                const Integer a = *find_entry(rows_[r], q);
                axpy(r, p, nearest_quotient(a, v));
                if (const Integer* rem = find_entry(rows_[r], q); rem && abs_value(*rem) < smallest) {
                    smallest = abs_value(*rem);
                    smaller_row = r;
                }
            }
            if (smaller_row) {
                p = *smaller_row;
                continue;
            }
            if (v == 1 || v == -1) break;
            // clear row p with column operations; column q is now zero off row p,
            // so each operation only changes row p
            std::optional<std::uint32_t> smaller_col;
            SparseRow& row = rows_[p];
            SparseRow kept;
            for (Entry& e : row) {
                if (e.col == q) {
                    kept.push_back(e);
                    continue;
                }
                Integer rem = e.val - nearest_quotient(e.val, v) * v;
                if (rem == 0) {
                    cols_[e.col].erase(p);
                    --nnz_;
                    continue;
                }
                if (abs_value(rem) < smallest) {
                    smallest = abs_value(rem);
                    smaller_col = e.col;
                }
                kept.push_back({e.col, std::move(rem)});
            }
            row = std::move(kept);
            if (!smaller_col) break;
            q = *smaller_col;
        }
        diag.push_back(abs_value(*find_entry(rows_[p], q)));
        for (const Entry& e : rows_[p]) {
            cols_[e.col].erase(p);
            --nnz_;
        }
        rows_[p].clear();
        active_rows_.erase(p);
    }

    SnfOptions opts_;
    std::vector<SparseRow> rows_;
    std::vector<std::set<std::uint32_t>> cols_;
    std::set<std::uint32_t> active_rows_;
    std::size_t nnz_ = 0;
};

}  // namespace detail

/// Smith normal form by sparse elimination: unit pivots of least Markowitz
/// cost first, otherwise the entry of least absolute value; a pivot is
/// reduced Euclid-style until its row and column are clear. Dense
/// elimination takes over when the active block fills up.
inline SnfResult snf(const IntMatrix& m, SnfOptions opts = {}) {
    detail::SparseEliminator elim(m, opts);
    SnfResult out;
    out.invariant_factors = detail::normalize_diagonal(elim.run());
    out.rank = out.invariant_factors.size();
    out.cokernel_free_rank = m.rows() - out.rank;
    for (const auto& d : out.invariant_factors) out.torsion *= d;
    return out;
}

/// Exact determinant of a square matrix (fraction-free Bareiss).
inline Integer determinant(std::vector<std::vector<Integer>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// gcd of all r x r minors (0 when they all vanish; 1 for r = 0).
/// Exponential in the matrix size; meant as an oracle for small inputs.
inline Integer minor_gcd(const IntMatrix& m, std::size_t r) {
    if (r > std::min(m.rows(), m.cols())) throw InvalidArgument("minor_gcd: r exceeds the matrix dimensions");
    if (r == 0) return 1;
    const auto dense = m.to_dense();
    auto subsets = [r](std::size_t n) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> pick(r);
        for (std::size_t i = 0; i < r; ++i) pick[i] = i;
        for (;;) {
            out.push_back(pick);
            std::size_t i = r;
            while (i > 0 && pick[i - 1] == n - r + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
        }
        return out;
    };
    Integer g = 0;
    const auto row_sets = subsets(m.rows());
    const auto col_sets = subsets(m.cols());
    for (const auto& rs : row_sets)
        for (const auto& cs : col_sets) {
            std::vector<std::vector<Integer>> minor(r, std::vector<Integer>(r));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) minor[i][j] = dense[rs[i]][cs[j]];
            g = gcd(g, determinant(std::move(minor)));
            if (g == 1) return g;
        }
    return g;
}

/// k^m with k the largest column l1-norm and m the row count; a zero
/// matrix (k = 0) gives 1. Always an upper bound for snf(M).torsion.
inline Integer torsion_bound(const IntMatrix& m) {
    const Integer k = m.max_column_l1();
    if (k == 0) return 1;
    return ipow(k, m.rows());
}

}  // namespace torsion

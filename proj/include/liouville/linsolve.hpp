#pragma once

#include <vector>

#include "liouville/rational.hpp"

namespace liouville {

/// Dense linear system A x = b over the rationals.
struct LinearSystem {
    std::size_t unknowns = 0;
    std::vector<std::vector<Rat>> rows; // each of size `unknowns`
    std::vector<Rat> rhs;

    std::size_t equations() const { return rows.size(); }
};

enum class SolveStatus { solved, inconsistent };

struct SolveResult {
    SolveStatus status = SolveStatus::inconsistent;
    std::vector<Rat> solution; // free unknowns pinned to 0
    std::size_t rank = 0;
};

/// Exact solve by fraction-free (Bareiss) Gaussian elimination: rows are
/// cleared to integers, elimination keeps entries integral via exact division
/// by the previous pivot, then back-substitution runs over rationals.
/// Underdetermined systems set free unknowns to zero.
inline SolveResult solve_linear(const LinearSystem& sys) {
    const std::size_t m = sys.rows.size(), n = sys.unknowns;
    std::vector<std::vector<Int>> a(m, std::vector<Int>(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        Int l(1);
        for (std::size_t j = 0; j < n; ++j) l = int_lcm(l, rat_den(sys.rows[i][j]));
        l = int_lcm(l, rat_den(sys.rhs[i]));
        for (std::size_t j = 0; j < n; ++j) {
            Rat v = sys.rows[i][j] * l;
            a[i][j] = rat_num(v);
        }
        Rat v = sys.rhs[i] * l;
        a[i][n] = rat_num(v);
    }

    std::vector<std::size_t> pivot_col; // pivot column of each eliminated row
    Int prev_pivot(1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t sel = row;
        while (sel < m && a[sel][col] == 0) ++sel;
        if (sel == m) continue; // free column
        std::swap(a[row], a[sel]);
        const Int p = a[row][col];
        for (std::size_t i = row + 1; i < m; ++i) {
            for (std::size_t j = col + 1; j <= n; ++j) {
                Int t = p * a[i][j] - a[i][col] * a[row][j];
                assert(t % prev_pivot == 0);
                a[i][j] = t / prev_pivot; // exact (Sylvester identity)
            }
            a[i][col] = 0;
        }
        prev_pivot = p;
        pivot_col.push_back(col);
        ++row;
    }

    // Consistency: any zero row with nonzero rhs is unsolvable.
    for (std::size_t i = row; i < m; ++i)
        if (a[i][n] != 0) return SolveResult{SolveStatus::inconsistent, {}, row};

    SolveResult res;
    res.status = SolveStatus::solved;
    res.rank = row;
    res.solution.assign(n, Rat(0));
    for (std::size_t k = row; k-- > 0;) {
        std::size_t c = pivot_col[k];
        Rat acc(a[k][n]);
        for (std::size_t j = c + 1; j < n; ++j)
            if (a[k][j] != 0) acc -= Rat(a[k][j]) * res.solution[j];
        res.solution[c] = acc / Rat(a[k][c]);
    }
    return res;
}

} // namespace liouville

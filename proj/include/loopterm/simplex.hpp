#pragma once

// Exact rational simplex (two-phase, Bland's rule) for small feasibility
// and optimization problems over free variables.

#include <cassert>
#include <cstddef>
#include <optional>
#include <vector>

#include "loopterm/lincons.hpp"

namespace loopterm {

enum class RowKind : std::uint8_t { Geq, Eq };  // a.x >= b | a.x = b

struct LpRow {
    std::vector<Rat> coeffs;  // length = number of free variables
    Rat rhs;
    RowKind kind = RowKind::Geq;
};

struct LpOutcome {
    bool feasible = false;
    bool unbounded = false;          // objective unbounded below
    Rat objective;                   // valid when feasible && !unbounded
    std::vector<Rat> point;          // values of the free variables
};

/// Minimize objective . x subject to the rows; pass an empty objective
/// for a pure feasibility check.
class Simplex {
public:
    static LpOutcome solve(const std::vector<LpRow>& rows, const std::vector<Rat>& objective = {}) {
        std::size_t nfree = objective.size();
        for (const LpRow& r : rows) nfree = std::max(nfree, r.coeffs.size());

        // Standard form: x = u - v with u,v >= 0, slack per Geq row.
        std::size_t nslack = 0;
        for (const LpRow& r : rows)
            if (r.kind == RowKind::Geq) ++nslack;
        const std::size_t m = rows.size();
        const std::size_t nvars = 2 * nfree + nslack;       // structural
        const std::size_t total = nvars + m;                // + artificials
        const std::size_t rhs_col = total;

        std::vector<std::vector<Rat>> T(m + 1, std::vector<Rat>(total + 1, Rat(0)));
        std::vector<std::size_t> basis(m);

        std::size_t slack = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const LpRow& r = rows[i];
            for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
                T[i][2 * j] = r.coeffs[j];
                T[i][2 * j + 1] = -r.coeffs[j];
            }
            if (r.kind == RowKind::Geq) T[i][2 * nfree + slack++] = Rat(-1);
            T[i][rhs_col] = r.rhs;
            if (T[i][rhs_col] < 0)
                for (auto& c : T[i]) c = -c;
            T[i][nvars + i] = Rat(1);
            basis[i] = nvars + i;
        }

        // Phase 1: minimize sum of artificials. Objective row holds the
        // negated reduced costs of that sum.
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= total; ++j)
                if (j < nvars || j == rhs_col) T[m][j] -= T[i][j];

        iterate(T, basis, total, rhs_col, nvars);  // forbid artificial entry
        LpOutcome out;
        if (T[m][rhs_col] != 0) return out;  // positive residual: infeasible
        out.feasible = true;

        // Drive leftover artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < nvars) continue;
            std::size_t piv = total;
            for (std::size_t j = 0; j < nvars; ++j)
                if (T[i][j] != 0) {
                    piv = j;
                    break;
                }
            if (piv == total) continue;  // redundant row
            pivot(T, basis, i, piv, rhs_col);
        }

        if (!objective.empty()) {
            // Phase 2 objective row: minimize c.x = c.(u - v).
            for (std::size_t j = 0; j <= total; ++j) T[m][j] = Rat(0);
            for (std::size_t j = 0; j < objective.size(); ++j) {
                T[m][2 * j] = objective[j];
                T[m][2 * j + 1] = -objective[j];
            }
            // price out the basis
            for (std::size_t i = 0; i < m; ++i) {
                if (T[m][basis[i]] == 0) continue;
                Rat f = T[m][basis[i]];
                for (std::size_t j = 0; j <= total; ++j) T[m][j] -= f * T[i][j];
            }
            if (!iterate(T, basis, total, rhs_col, nvars)) {
                out.unbounded = true;
                return out;
            }
            out.objective = -T[m][rhs_col];
        } else {
            out.objective = Rat(0);
        }

        out.point.assign(nfree, Rat(0));
        std::vector<Rat> vals(nvars, Rat(0));
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < nvars) vals[basis[i]] = T[i][rhs_col];
        for (std::size_t j = 0; j < nfree; ++j) out.point[j] = vals[2 * j] - vals[2 * j + 1];
        return out;
    }

private:
    static void pivot(std::vector<std::vector<Rat>>& T, std::vector<std::size_t>& basis,
                      std::size_t row, std::size_t col, std::size_t rhs_col) {
        Rat p = T[row][col];
        for (std::size_t j = 0; j <= rhs_col; ++j) T[row][j] /= p;
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (i == row || T[i][col] == 0) continue;
            Rat f = T[i][col];
            for (std::size_t j = 0; j <= rhs_col; ++j) T[i][j] -= f * T[row][j];
        }
        basis[row] = col;
    }

    /// Bland's rule minimization; returns false on unboundedness.
    static bool iterate(std::vector<std::vector<Rat>>& T, std::vector<std::size_t>& basis,
                        std::size_t total, std::size_t rhs_col, std::size_t enter_limit) {
        const std::size_t m = T.size() - 1;
        for (;;) {
            std::size_t col = total;
            for (std::size_t j = 0; j < enter_limit; ++j)
                if (T[m][j] < 0) {
                    col = j;
                    break;
                }
            if (col == total) return true;  // optimal
            std::size_t row = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][col] <= 0) continue;
                if (row == m) {
                    row = i;
                    continue;
                }
                Rat cur = T[i][rhs_col] / T[i][col];
                Rat best = T[row][rhs_col] / T[row][col];
                if (cur < best || (cur == best && basis[i] < basis[row])) row = i;
            }
            if (row == m) return false;  // unbounded
            pivot(T, basis, row, col, rhs_col);
        }
    }
};

}  // namespace loopterm

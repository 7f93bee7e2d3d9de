#include "phevsim/lp.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace phevsim::lp {

namespace {

constexpr double kPivotEps = 1e-11;

/// Dense simplex tableau. Layout: rows 0..m-1 are constraints, row m is the
/// objective (reduced costs, maximization). Column layout: structural vars,
/// slack/surplus vars, artificial vars, rhs last.
struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;  // including rhs
    std::vector<double> a;
    std::vector<std::size_t> basis;  // basic column per row

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c < cols; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            const double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) at(r, c) -= factor * at(pr, c);
        }
        basis[pr] = pc;
    }

    /// Bland's rule iteration on the objective row over columns < limit.
    /// Returns false when optimal, throws nothing; sets *unbounded when a
    /// column can improve without a blocking row.
    bool step(std::size_t col_limit, bool* unbounded) {
        std::size_t entering = cols;
        for (std::size_t c = 0; c < col_limit; ++c) {
            if (at(rows, c) > kPivotEps) {
                entering = c;
                break;
            }
        }
        if (entering == cols) return false;

        std::size_t leaving = rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows; ++r) {
            const double coeff = at(r, entering);
            if (coeff > kPivotEps) {
                const double ratio = at(r, cols - 1) / coeff;
                if (ratio < best_ratio - kPivotEps ||
                    (ratio < best_ratio + kPivotEps && (leaving == rows || basis[r] < basis[leaving]))) {
                    best_ratio = ratio;
                    leaving = r;
                }
            }
        }
        if (leaving == rows) {
            *unbounded = true;
            return false;
        }
        pivot(leaving, entering);
        return true;
    }
};

}  // namespace

Solution maximize(const std::vector<double>& objective,
                  const std::vector<Constraint>& constraints,
                  double feasibility_eps) {
    const std::size_t n = objective.size();
    const std::size_t m = constraints.size();

    // Column plan: one slack/surplus per inequality row, one artificial per
    // row that needs one (>= and = rows, after normalizing rhs >= 0).
    std::size_t num_slack = 0;
    for (const Constraint& c : constraints) {
        if (c.rel != Relation::Equal) ++num_slack;
    }

    struct RowInfo {
        double sign = 1.0;   // applied to coeffs/rhs so rhs >= 0
        Relation rel = Relation::LessEq;
    };
    std::vector<RowInfo> info(m);
    std::vector<bool> needs_artificial(m, false);
    std::size_t num_art = 0;
    for (std::size_t r = 0; r < m; ++r) {
        assert(constraints[r].coeffs.size() == n);
        Relation rel = constraints[r].rel;
        double sign = 1.0;
        if (constraints[r].rhs < 0.0) {
            sign = -1.0;
            if (rel == Relation::LessEq) rel = Relation::GreaterEq;
            else if (rel == Relation::GreaterEq) rel = Relation::LessEq;
        }
        info[r] = {sign, rel};
        needs_artificial[r] = (rel != Relation::LessEq);
        if (needs_artificial[r]) ++num_art;
    }

    Tableau t;
    t.rows = m;
    t.cols = n + num_slack + num_art + 1;
    t.a.assign((m + 1) * t.cols, 0.0);
    t.basis.assign(m, 0);

    const std::size_t slack_base = n;
    const std::size_t art_base = n + num_slack;
    const std::size_t rhs_col = t.cols - 1;

    std::size_t slack_idx = 0;
    std::size_t art_idx = 0;
    for (std::size_t r = 0; r < m; ++r) {
        const Constraint& c = constraints[r];
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = info[r].sign * c.coeffs[j];
        t.at(r, rhs_col) = info[r].sign * c.rhs;
        if (info[r].rel == Relation::LessEq) {
            t.at(r, slack_base + slack_idx) = 1.0;
            t.basis[r] = slack_base + slack_idx;
            ++slack_idx;
        } else if (info[r].rel == Relation::GreaterEq) {
            t.at(r, slack_base + slack_idx) = -1.0;
            ++slack_idx;
            t.at(r, art_base + art_idx) = 1.0;
            t.basis[r] = art_base + art_idx;
            ++art_idx;
        } else {
            t.at(r, art_base + art_idx) = 1.0;
            t.basis[r] = art_base + art_idx;
            ++art_idx;
        }
    }

    Solution out;

    if (num_art > 0) {
        // Phase 1: maximize -(sum of artificials); price the basic
        // artificials out of the objective row first.
        for (std::size_t c = art_base; c < art_base + num_art; ++c) t.at(m, c) = -1.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] >= art_base) {
                for (std::size_t c = 0; c < t.cols; ++c) t.at(m, c) += t.at(r, c);
            }
        }
        bool unbounded = false;
        while (t.step(rhs_col, &unbounded)) {
        }
        assert(!unbounded);  // phase-1 objective is bounded by 0
        // The objective row's rhs tracks the negated objective, i.e. the
        // remaining sum of artificials.
        const double infeasibility = t.at(m, rhs_col);
        if (infeasibility > feasibility_eps) {
            out.status = Status::Infeasible;
            return out;
        }
        // Pivot any artificial still basic (at zero) out on a structural or
        // slack column; a row with no such column is redundant and inert.
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] < art_base) continue;
            for (std::size_t c = 0; c < art_base; ++c) {
                if (std::fabs(t.at(r, c)) > kPivotEps) {
                    t.pivot(r, c);
                    break;
                }
            }
        }
        // Erase the artificial columns from play.
        for (std::size_t r = 0; r <= m; ++r) {
            for (std::size_t c = art_base; c < art_base + num_art; ++c) t.at(r, c) = 0.0;
        }
    }

    // Phase 2: install the real objective (as reduced costs) and price out
    // the current basis.
    for (std::size_t c = 0; c < t.cols; ++c) t.at(m, c) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.at(m, j) = objective[j];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = t.basis[r];
        const double cost = b < n ? objective[b] : 0.0;
        if (cost == 0.0) continue;
        for (std::size_t c = 0; c < t.cols; ++c) t.at(m, c) -= cost * t.at(r, c);
    }

    bool unbounded = false;
    while (t.step(art_base, &unbounded)) {
    }
    if (unbounded) {
        out.status = Status::Unbounded;
        return out;
    }

    out.status = Status::Optimal;
    out.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < n) out.x[t.basis[r]] = t.at(r, rhs_col);
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += objective[j] * out.x[j];
    out.objective = value;
    return out;
}

}  // namespace phevsim::lp

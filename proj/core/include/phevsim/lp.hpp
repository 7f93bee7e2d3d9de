#pragma once

#include <cstddef>
#include <vector>

namespace phevsim::lp {

enum class Relation { LessEq, GreaterEq, Equal };

/// One row: coeffs . x  (rel)  rhs. coeffs must have num_vars entries.
struct Constraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// Maximizes objective . x subject to the given rows and x >= 0, with a
/// dense two-phase primal simplex (Bland's rule, so it cannot cycle).
/// Upper bounds are ordinary rows. Intended for the small problems this
/// project generates; everything is O(rows * cols) per pivot.
Solution maximize(const std::vector<double>& objective,
                  const std::vector<Constraint>& constraints,
                  double feasibility_eps = 1e-9);

}  // namespace phevsim::lp

#include "phevsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "phevsim/lp.hpp"

namespace phevsim {

namespace {

constexpr double kFeasibilityEps = 1e-9;

void validate_instances(const std::vector<SegmentInstance>& instances) {
    if (instances.empty()) {
        raise(Errc::empty_instances, "no segment instances given");
    }
    std::set<SegmentId> seen;
    for (const SegmentInstance& inst : instances) {
        if (!seen.insert(inst.id).second) {
            raise(Errc::duplicate_id, "segment '" + inst.id + "' appears twice in the instance set");
        }
        if (inst.probability < 0.0 || inst.probability > 1.0) {
            raise(Errc::invalid_instance, "probability of '" + inst.id + "' outside [0, 1]");
        }
        if (inst.density < 0.0 || inst.energy_kwh < 0.0 || inst.flow < 0.0) {
            raise(Errc::invalid_instance, "negative density, energy or flow on '" + inst.id + "'");
        }
    }
}

void check_budget(double budget_kwh) {
    if (budget_kwh < 0.0) {
        raise(Errc::negative_budget, "budget must be >= 0");
    }
}

double objective_value(const std::vector<SegmentInstance>& instances,
                       const std::map<SegmentId, double>& x, bool flow_weighted) {
    double value = 0.0;
    for (const SegmentInstance& inst : instances) {
        const double weight = flow_weighted ? inst.flow : 1.0;
        value += inst.probability * inst.density * inst.energy_kwh * weight * x.at(inst.id);
    }
    return value;
}

void report_binding(AllocationPlan& plan) {
    for (const ConstraintRow& row : plan.constraints) {
        const double lhs = row.lhs(plan.x);
        if (std::fabs(lhs - row.rhs) <= kFeasibilityEps * std::max(1.0, std::fabs(row.rhs))) {
            plan.binding.push_back(row.name);
        }
    }
    for (const auto& [id, value] : plan.x) {
        if (value >= 1.0 - 1e-12) {
            plan.binding.push_back("x[" + id + "]=1");
        }
    }
}

/// Shared greedy for the single-budget problems. Processes segments in
/// descending key order; a group of equal keys at the budget boundary is
/// filled with one common fraction.
AllocationPlan solve_greedy(const std::vector<SegmentInstance>& instances,
                            double budget_kwh, bool flow_weighted) {
    validate_instances(instances);
    check_budget(budget_kwh);

    AllocationPlan plan;
    plan.constraints.push_back(expected_budget_constraint(instances, budget_kwh));

    if (budget_kwh == 0.0) {
        for (const SegmentInstance& inst : instances) plan.x[inst.id] = 0.0;
        plan.status = PlanStatus::Optimal;
        report_binding(plan);
        return plan;
    }

    double total_cost = 0.0;
    for (const SegmentInstance& inst : instances) {
        total_cost += inst.probability * inst.energy_kwh;
    }
    if (budget_kwh >= total_cost) {
        for (const SegmentInstance& inst : instances) plan.x[inst.id] = 1.0;
        plan.status = PlanStatus::TrivialAllOne;
        plan.objective = objective_value(instances, plan.x, flow_weighted);
        plan.budget_used = total_cost;
        report_binding(plan);
        return plan;
    }

    std::vector<const SegmentInstance*> order;
    order.reserve(instances.size());
    for (const SegmentInstance& inst : instances) order.push_back(&inst);
    auto key = [flow_weighted](const SegmentInstance* inst) {
        return flow_weighted ? inst->density * inst->flow : inst->density;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](const SegmentInstance* a, const SegmentInstance* b) {
                         return key(a) > key(b);
                     });

    double remaining = budget_kwh;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        double group_cost = 0.0;
        while (j < order.size() && key(order[j]) == key(order[i])) {
            group_cost += order[j]->probability * order[j]->energy_kwh;
            ++j;
        }
        double fraction;
        if (group_cost <= remaining) {
            fraction = 1.0;  // covers free (zero-cost) groups as well
            remaining -= group_cost;
        } else {
            fraction = remaining / group_cost;
            remaining = 0.0;
        }
        for (std::size_t k = i; k < j; ++k) plan.x[order[k]->id] = fraction;
        i = j;
    }

    plan.status = PlanStatus::Optimal;
    plan.objective = objective_value(instances, plan.x, flow_weighted);
    plan.budget_used = plan.constraints.front().lhs(plan.x);
    report_binding(plan);
    return plan;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

std::string_view to_string(PlanStatus status) noexcept {
    switch (status) {
        case PlanStatus::Optimal: return "Optimal";
        case PlanStatus::TrivialAllOne: return "TrivialAllOne";
        case PlanStatus::InfeasibleCap: return "InfeasibleCap";
    }
    return "Unknown";
}

double ConstraintRow::lhs(const std::map<SegmentId, double>& x) const {
    double total = 0.0;
    for (const auto& [id, coeff] : coeffs) {
        auto it = x.find(id);
        if (it != x.end()) total += coeff * it->second;
    }
    return total;
}

std::string ConstraintRow::render() const {
    std::string out;
    char buf[64];
    bool first = true;
    for (const auto& [id, coeff] : coeffs) {
        std::snprintf(buf, sizeof(buf), "%.9g", coeff);
        if (!first) out += " + ";
        out += buf;
        out += "*x[" + id + "]";
        first = false;
    }
    std::snprintf(buf, sizeof(buf), "%.9g", rhs);
    out += " <= ";
    out += buf;
    return out;
}

ConstraintRow expected_budget_constraint(const std::vector<SegmentInstance>& instances,
                                         double budget_kwh) {
    ConstraintRow row;
    row.name = "budget";
    row.rhs = budget_kwh;
    for (const SegmentInstance& inst : instances) {
        row.coeffs[inst.id] = inst.probability * inst.energy_kwh;
    }
    return row;
}

std::vector<ConstraintRow> robust_route_constraints(
    const std::vector<SegmentInstance>& instances,
    const std::vector<std::vector<SegmentId>>& routes, double budget_kwh) {
    std::map<SegmentId, double> energy;
    for (const SegmentInstance& inst : instances) energy[inst.id] = inst.energy_kwh;
    std::vector<ConstraintRow> rows;
    rows.reserve(routes.size());
    for (std::size_t r = 0; r < routes.size(); ++r) {
        ConstraintRow row;
        row.name = "route_" + std::to_string(r + 1);
        row.rhs = budget_kwh;
        for (const SegmentId& id : routes[r]) {
            auto it = energy.find(id);
            if (it == energy.end()) {
                raise(Errc::unknown_segment,
                      "route constraint references segment '" + id + "' with no instance");
            }
            row.coeffs[id] = it->second;  // unweighted by probability
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

AllocationPlan solve_expected(const std::vector<SegmentInstance>& instances,
                              double budget_kwh) {
    return solve_greedy(instances, budget_kwh, /*flow_weighted=*/false);
}

AllocationPlan solve_flow(const std::vector<SegmentInstance>& instances,
                          double budget_kwh) {
    return solve_greedy(instances, budget_kwh, /*flow_weighted=*/true);
}

AllocationPlan solve_robust(const std::vector<SegmentInstance>& instances,
                            const std::vector<std::vector<SegmentId>>& routes,
                            double budget_kwh) {
    validate_instances(instances);
    check_budget(budget_kwh);

    AllocationPlan plan;
    plan.constraints = robust_route_constraints(instances, routes, budget_kwh);

    if (budget_kwh == 0.0) {
        for (const SegmentInstance& inst : instances) plan.x[inst.id] = 0.0;
        plan.status = PlanStatus::Optimal;
        report_binding(plan);
        return plan;
    }

    double worst_route = 0.0;
    for (const ConstraintRow& row : plan.constraints) {
        double total = 0.0;
        for (const auto& [id, coeff] : row.coeffs) {
            (void)id;
            total += coeff;
        }
        worst_route = std::max(worst_route, total);
    }
    if (budget_kwh >= worst_route) {
        for (const SegmentInstance& inst : instances) plan.x[inst.id] = 1.0;
        plan.status = PlanStatus::TrivialAllOne;
        plan.objective = objective_value(instances, plan.x, /*flow_weighted=*/false);
        plan.budget_used = worst_route;
        report_binding(plan);
        return plan;
    }

    // Exact LP: variables follow instance order, upper bounds as rows.
    const std::size_t n = instances.size();
    std::map<SegmentId, std::size_t> index;
    std::vector<double> objective(n);
    for (std::size_t j = 0; j < n; ++j) {
        index[instances[j].id] = j;
        objective[j] =
            instances[j].probability * instances[j].density * instances[j].energy_kwh;
    }
    std::vector<lp::Constraint> rows;
    for (const ConstraintRow& row : plan.constraints) {
        lp::Constraint c;
        c.coeffs.assign(n, 0.0);
        for (const auto& [id, coeff] : row.coeffs) c.coeffs[index.at(id)] = coeff;
        c.rel = lp::Relation::LessEq;
        c.rhs = row.rhs;
        rows.push_back(std::move(c));
    }
    for (std::size_t j = 0; j < n; ++j) {
        lp::Constraint bound;
        bound.coeffs.assign(n, 0.0);
        bound.coeffs[j] = 1.0;
        bound.rel = lp::Relation::LessEq;
        bound.rhs = 1.0;
        rows.push_back(std::move(bound));
    }
    const lp::Solution solution = lp::maximize(objective, rows);
    // x >= 0 and budget >= 0 make the all-zero point feasible and the box
    // bounds keep the value finite, so the LP is always solvable here.
    if (solution.status != lp::Status::Optimal) {
        raise(Errc::invalid_instance, "robust allocation LP failed unexpectedly");
    }
    for (std::size_t j = 0; j < n; ++j) {
        plan.x[instances[j].id] = clamp01(solution.x[j]);
    }
    plan.status = PlanStatus::Optimal;
    plan.objective = objective_value(instances, plan.x, /*flow_weighted=*/false);
    for (const ConstraintRow& row : plan.constraints) {
        plan.budget_used = std::max(plan.budget_used, row.lhs(plan.x));
    }
    report_binding(plan);
    return plan;
}

AllocationPlan solve_green_zone(const std::vector<SegmentInstance>& instances,
                                const std::set<SegmentId>& green_segments,
                                double budget_kwh, GreenZoneBase base) {
    validate_instances(instances);
    check_budget(budget_kwh);

    std::set<SegmentId> ids;
    for (const SegmentInstance& inst : instances) ids.insert(inst.id);
    for (const SegmentId& id : green_segments) {
        if (!ids.contains(id)) {
            raise(Errc::unknown_segment, "green segment '" + id + "' has no instance");
        }
    }

    double reserve = 0.0;
    ConstraintRow reserve_row;
    reserve_row.name = "green_zone_reserve";
    reserve_row.rhs = budget_kwh;
    std::vector<SegmentInstance> rest;
    std::vector<SegmentInstance> green;
    for (const SegmentInstance& inst : instances) {
        if (green_segments.contains(inst.id)) {
            reserve += inst.probability * inst.energy_kwh;
            reserve_row.coeffs[inst.id] = inst.probability * inst.energy_kwh;
            green.push_back(inst);
        } else {
            rest.push_back(inst);
        }
    }
    if (reserve > budget_kwh + kFeasibilityEps) {
        raise(Errc::insufficient_green_budget,
              "green zone needs " + std::to_string(reserve) + " kWh but only " +
                  std::to_string(budget_kwh) + " kWh is available");
    }

    AllocationPlan plan;
    if (rest.empty()) {
        plan.status = PlanStatus::TrivialAllOne;
    } else {
        const double remaining = std::max(0.0, budget_kwh - reserve);
        AllocationPlan inner = base == GreenZoneBase::Flow ? solve_flow(rest, remaining)
                                                           : solve_expected(rest, remaining);
        plan.x = std::move(inner.x);
        plan.status = inner.status;
        plan.constraints = std::move(inner.constraints);
        plan.binding = std::move(inner.binding);
        plan.budget_used = inner.budget_used;
        plan.objective = inner.objective;
    }
    if (!green.empty()) {
        plan.constraints.insert(plan.constraints.begin(), reserve_row);
        for (const SegmentInstance& inst : green) {
            plan.x[inst.id] = 1.0;
            plan.objective +=
                inst.probability * inst.density * inst.energy_kwh *
                (base == GreenZoneBase::Flow ? inst.flow : 1.0);
            plan.binding.push_back("x[" + inst.id + "]=1");
        }
        plan.budget_used += reserve;
    }
    return plan;
}

AllocationPlan none_opt_plan(const std::vector<SegmentInstance>& instances,
                             double budget_kwh) {
    validate_instances(instances);
    check_budget(budget_kwh);
    double total_energy = 0.0;
    for (const SegmentInstance& inst : instances) total_energy += inst.energy_kwh;
    const double fraction =
        total_energy > 0.0 ? std::min(1.0, budget_kwh / total_energy) : 1.0;

    AllocationPlan plan;
    ConstraintRow row;
    row.name = "route_energy";
    row.rhs = budget_kwh;
    for (const SegmentInstance& inst : instances) {
        row.coeffs[inst.id] = inst.energy_kwh;
        plan.x[inst.id] = fraction;
    }
    plan.constraints.push_back(std::move(row));
    plan.status = fraction >= 1.0 ? PlanStatus::TrivialAllOne : PlanStatus::Optimal;
    plan.objective = objective_value(instances, plan.x, /*flow_weighted=*/false);
    plan.budget_used = plan.constraints.front().lhs(plan.x);
    report_binding(plan);
    return plan;
}

FleetAllocation solve_capped_fleet(const std::vector<std::vector<SegmentInstance>>& vehicles,
                                   const std::vector<double>& budgets_kwh,
                                   const std::map<SegmentId, double>& caps) {
    if (vehicles.empty()) {
        raise(Errc::empty_instances, "no vehicles given");
    }
    if (budgets_kwh.size() != vehicles.size()) {
        raise(Errc::invalid_instance, "one budget per vehicle required");
    }
    for (const auto& instances : vehicles) validate_instances(instances);
    for (double budget : budgets_kwh) check_budget(budget);
    for (const auto& [id, cap] : caps) {
        if (cap < 0.0) {
            raise(Errc::negative_cap, "cap on '" + id + "' is negative");
        }
    }

    FleetAllocation out;

    if (caps.empty()) {
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            out.plans.push_back(solve_flow(vehicles[v], budgets_kwh[v]));
        }
    } else {
        // Joint LP over all vehicles' fractions plus one violation variable
        // t. Solved twice: first minimize t (max cap relief), then fix t
        // and maximize the summed flow-weighted objective.
        struct VarRef {
            std::size_t vehicle;
            std::size_t instance;
        };
        std::vector<VarRef> vars;
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            for (std::size_t i = 0; i < vehicles[v].size(); ++i) {
                vars.push_back({v, i});
            }
        }
        const std::size_t n = vars.size();
        const std::size_t t_var = n;

        std::vector<lp::Constraint> rows;
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            lp::Constraint c;
            c.coeffs.assign(n + 1, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                if (vars[k].vehicle == v) {
                    const SegmentInstance& inst = vehicles[v][vars[k].instance];
                    c.coeffs[k] = inst.probability * inst.energy_kwh;
                }
            }
            c.rel = lp::Relation::LessEq;
            c.rhs = budgets_kwh[v];
            rows.push_back(std::move(c));
        }
        for (const auto& [segment, cap] : caps) {
            // sum_v d*(1-x) <= cap + t  <=>  sum_v d*x + t >= D - cap
            lp::Constraint c;
            c.coeffs.assign(n + 1, 0.0);
            double total_density = 0.0;
            bool touched = false;
            for (std::size_t k = 0; k < n; ++k) {
                const SegmentInstance& inst = vehicles[vars[k].vehicle][vars[k].instance];
                if (inst.id == segment && inst.probability > 0.0) {
                    c.coeffs[k] = inst.density;
                    total_density += inst.density;
                    touched = true;
                }
            }
            if (!touched) continue;  // no vehicle traverses this segment
            c.coeffs[t_var] = 1.0;
            c.rel = lp::Relation::GreaterEq;
            c.rhs = total_density - cap;
            rows.push_back(std::move(c));
        }
        for (std::size_t k = 0; k < n; ++k) {
            lp::Constraint bound;
            bound.coeffs.assign(n + 1, 0.0);
            bound.coeffs[k] = 1.0;
            bound.rel = lp::Relation::LessEq;
            bound.rhs = 1.0;
            rows.push_back(std::move(bound));
        }

        std::vector<double> minimize_violation(n + 1, 0.0);
        minimize_violation[t_var] = -1.0;
        const lp::Solution relief = lp::maximize(minimize_violation, rows);
        if (relief.status != lp::Status::Optimal) {
            raise(Errc::invalid_instance, "fleet cap LP failed unexpectedly");
        }
        const double violation = std::max(0.0, relief.x[t_var]);

        std::vector<double> objective(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const SegmentInstance& inst = vehicles[vars[k].vehicle][vars[k].instance];
            objective[k] = inst.probability * inst.density * inst.energy_kwh * inst.flow;
        }
        lp::Constraint fix_t;
        fix_t.coeffs.assign(n + 1, 0.0);
        fix_t.coeffs[t_var] = 1.0;
        fix_t.rel = lp::Relation::LessEq;
        fix_t.rhs = violation + 1e-9;
        rows.push_back(std::move(fix_t));

        const lp::Solution best = lp::maximize(objective, rows);
        if (best.status != lp::Status::Optimal) {
            raise(Errc::invalid_instance, "fleet objective LP failed unexpectedly");
        }

        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            AllocationPlan plan;
            plan.constraints.push_back(
                expected_budget_constraint(vehicles[v], budgets_kwh[v]));
            out.plans.push_back(std::move(plan));
        }
        for (std::size_t k = 0; k < n; ++k) {
            const SegmentInstance& inst = vehicles[vars[k].vehicle][vars[k].instance];
            out.plans[vars[k].vehicle].x[inst.id] = clamp01(best.x[k]);
        }
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            AllocationPlan& plan = out.plans[v];
            plan.objective = objective_value(vehicles[v], plan.x, /*flow_weighted=*/true);
            plan.budget_used = plan.constraints.front().lhs(plan.x);
            plan.status = PlanStatus::Optimal;
            report_binding(plan);
        }
    }

    for (std::size_t v = 0; v < vehicles.size(); ++v) {
        for (const SegmentInstance& inst : vehicles[v]) {
            if (inst.probability <= 0.0) continue;
            const double x = out.plans[v].x.at(inst.id);
            out.pollutant_units[inst.id] += inst.density * (1.0 - x);
            out.clean_air_units[inst.id] += inst.density * x;
        }
    }
    double worst = 0.0;
    for (const auto& [segment, cap] : caps) {
        auto it = out.pollutant_units.find(segment);
        const double units = it == out.pollutant_units.end() ? 0.0 : it->second;
        worst = std::max(worst, units - cap);
    }
    out.max_cap_violation = std::max(0.0, worst);
    out.status = out.max_cap_violation > 1e-7 ? PlanStatus::InfeasibleCap : PlanStatus::Optimal;
    return out;
}

}  // namespace phevsim

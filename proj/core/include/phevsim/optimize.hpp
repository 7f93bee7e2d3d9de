#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "phevsim/road_network.hpp"

namespace phevsim {

/// Per-segment data for one allocation problem: probability of traversal,
/// pedestrian count, expected electric energy and (optionally) relative
/// traffic flow.
struct SegmentInstance {
    SegmentId id;
    double probability = 1.0;  // p in [0, 1]
    double density = 0.0;      // pedestrians along the segment, >= 0
    double energy_kwh = 0.0;   // expected full-electric energy, >= 0
    double flow = 1.0;         // relative traffic flow, >= 0
};

enum class PlanStatus { Optimal, TrivialAllOne, InfeasibleCap };

std::string_view to_string(PlanStatus status) noexcept;

/// One generated constraint row: sum of coeffs[s] * x[s] <= rhs.
struct ConstraintRow {
    std::string name;
    std::map<SegmentId, double> coeffs;
    double rhs = 0.0;

    double lhs(const std::map<SegmentId, double>& x) const;
    std::string render() const;
};

/// Electric-mode fractions per segment plus the constraint system they were
/// solved against and which parts of it bind at the optimum.
struct AllocationPlan {
    std::map<SegmentId, double> x;
    double objective = 0.0;
    double budget_used = 0.0;  // worst active constraint LHS, in kWh
    PlanStatus status = PlanStatus::Optimal;
    std::vector<ConstraintRow> constraints;
    std::vector<std::string> binding;  // names of tight rows and "x[s]=1" bounds
};

/// Maximizes sum p*d*e*x subject to sum p*e*x <= budget and 0 <= x <= 1.
/// Greedy by descending pedestrian density; segments tied in density at the
/// budget boundary receive equal fractions.
AllocationPlan solve_expected(const std::vector<SegmentInstance>& instances,
                              double budget_kwh);

/// Same objective, but the energy constraint must hold on every route
/// individually (sum over the route's segments of e*x <= budget, unweighted
/// by probability), so the battery can never be exceeded whichever route the
/// driver picks. Solved as an exact LP.
AllocationPlan solve_robust(const std::vector<SegmentInstance>& instances,
                            const std::vector<std::vector<SegmentId>>& routes,
                            double budget_kwh);

/// Flow-weighted variant: maximizes sum p*d*e*f*x under the expected-energy
/// budget. Greedy by descending density*flow.
AllocationPlan solve_flow(const std::vector<SegmentInstance>& instances,
                          double budget_kwh);

enum class GreenZoneBase { Expected, Flow };

/// Forces full electric mode on the green segments, reserves their expected
/// energy off the budget, and solves the base problem on what remains.
AllocationPlan solve_green_zone(const std::vector<SegmentInstance>& instances,
                                const std::set<SegmentId>& green_segments,
                                double budget_kwh,
                                GreenZoneBase base = GreenZoneBase::Expected);

/// Benchmark plan: a single uniform fraction min(1, budget / sum e) on every
/// segment, sized against the energies supplied (callers pass the maximum
/// observed energies). No optimization.
AllocationPlan none_opt_plan(const std::vector<SegmentInstance>& instances,
                             double budget_kwh);

/// Joint fleet allocation under per-segment pollutant caps.
struct FleetAllocation {
    std::vector<AllocationPlan> plans;  // one per vehicle, same order as input
    PlanStatus status = PlanStatus::Optimal;
    double max_cap_violation = 0.0;  // pollutant units above the worst cap
    std::map<SegmentId, double> pollutant_units;  // aggregate d*(1-x) per segment
    std::map<SegmentId, double> clean_air_units;  // aggregate d*x per segment
};

/// Maximizes the summed flow-weighted objectives subject to each vehicle's
/// budget and, per capped segment, an aggregate pollutant bound over the
/// vehicles traversing it. When the caps cannot all be met the result
/// minimizes the maximum violation first, then re-maximizes the objective,
/// and reports InfeasibleCap.
FleetAllocation solve_capped_fleet(const std::vector<std::vector<SegmentInstance>>& vehicles,
                                   const std::vector<double>& budgets_kwh,
                                   const std::map<SegmentId, double>& caps);

/// Constraint generators, shared by the solvers and the reporting layer.
ConstraintRow expected_budget_constraint(const std::vector<SegmentInstance>& instances,
                                         double budget_kwh);
std::vector<ConstraintRow> robust_route_constraints(
    const std::vector<SegmentInstance>& instances,
    const std::vector<std::vector<SegmentId>>& routes, double budget_kwh);

}  // namespace phevsim

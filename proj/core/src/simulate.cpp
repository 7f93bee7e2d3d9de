#include "phevsim/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "phevsim/rng.hpp"

namespace phevsim {

namespace {

double normalized_flow(const std::map<SegmentId, double>& flows, const SegmentId& segment) {
    if (flows.empty()) return 1.0;
    double total = 0.0;
    for (const auto& [id, flow] : flows) {
        (void)id;
        total += flow;
    }
    if (total <= 0.0) return 1.0;
    auto it = flows.find(segment);
    return it == flows.end() ? 0.0 : it->second / total;
}

double model_energy(const TripHistory& history, const SegmentId& segment, EnergyModel model) {
    const EnergyEstimate estimate = history.expected_energy(segment);
    return model == EnergyModel::Mean ? estimate.mean_kwh : estimate.max_kwh;
}

/// Instances for every segment the vehicle may still traverse (p > 0),
/// with densities polled at `time_s`.
std::vector<SegmentInstance> build_instances(const SegmentPrediction& prediction,
                                             const TripHistory& history,
                                             const DensityProvider& density,
                                             const SimulationContext& context,
                                             EnergyModel energy_model, double time_s) {
    std::vector<SegmentInstance> instances;
    for (const auto& [segment, p] : prediction.segment_probs) {
        if (p <= 0.0) continue;
        SegmentInstance inst;
        inst.id = segment;
        inst.probability = p;
        inst.density = density.density(segment, time_s);
        inst.energy_kwh = model_energy(history, segment, energy_model);
        inst.flow = normalized_flow(context.flows, segment);
        instances.push_back(std::move(inst));
    }
    return instances;
}

/// Remaining-route constraint sets for the robust policy: the suffix of
/// every matching route from the current segment onward.
std::vector<std::vector<SegmentId>> route_suffixes(const RoadNetwork& network,
                                                   const std::map<RouteId, double>& route_probs,
                                                   const SegmentId& current) {
    std::vector<std::vector<SegmentId>> suffixes;
    for (const auto& [route_id, p] : route_probs) {
        if (p <= 0.0) continue;
        const Route& route = network.route(route_id);
        auto it = std::find(route.segments.begin(), route.segments.end(), current);
        suffixes.emplace_back(it, route.segments.end());
    }
    return suffixes;
}

AllocationPlan solve_policy(Policy policy, const std::vector<SegmentInstance>& instances,
                            const std::vector<std::vector<SegmentId>>& suffixes,
                            const SimulationContext& context, double budget_kwh) {
    switch (policy) {
        case Policy::Expected:
            return solve_expected(instances, budget_kwh);
        case Policy::Flow:
            return solve_flow(instances, budget_kwh);
        case Policy::Robust:
            return solve_robust(instances, suffixes, budget_kwh);
        case Policy::GreenZone: {
            std::set<SegmentId> alive_green;
            for (const SegmentInstance& inst : instances) {
                if (context.green_segments.contains(inst.id)) alive_green.insert(inst.id);
            }
            return solve_green_zone(instances, alive_green, budget_kwh, context.green_base);
        }
        case Policy::NoneOpt:
            break;  // handled by the caller, needs the realized route
    }
    raise(Errc::invalid_instance, "policy not solvable here");
}

RouteId realize_route(const RoadNetwork& network, const TripHistory& history,
                      const VehicleConfig& vehicle, Rng& rng) {
    if (vehicle.route) {
        if (!network.has_route(*vehicle.route)) {
            raise(Errc::unknown_route, "no route '" + *vehicle.route + "'");
        }
        return *vehicle.route;
    }
    if (!vehicle.origin) {
        raise(Errc::unknown_route, "vehicle needs a route or an origin to sample from");
    }
    const auto probs = route_probabilities(history, network, *vehicle.origin);
    const double u = rng.uniform();
    double cumulative = 0.0;
    RouteId last;
    for (const auto& [route_id, p] : probs) {
        if (p <= 0.0) continue;
        cumulative += p;
        last = route_id;
        if (u < cumulative) return route_id;
    }
    return last;  // u landed in the rounding tail
}

}  // namespace

std::string_view to_string(Policy policy) noexcept {
    switch (policy) {
        case Policy::Expected: return "expected";
        case Policy::Robust: return "robust";
        case Policy::Flow: return "flow";
        case Policy::GreenZone: return "green_zone";
        case Policy::NoneOpt: return "none_opt";
    }
    return "unknown";
}

std::string_view to_string(EnergyModel model) noexcept {
    return model == EnergyModel::Mean ? "mean" : "max";
}

std::string_view to_string(EnergyRealization realization) noexcept {
    return realization == EnergyRealization::Model ? "model" : "sampled";
}

SimulationTrace run_single(const RoadNetwork& network, const TripHistory& history,
                           const VehicleConfig& vehicle, const DensityProvider& density,
                           const SimulationContext& context, std::uint64_t seed) {
    if (vehicle.initial_budget_kwh < 0.0) {
        raise(Errc::negative_budget, "initial budget must be >= 0");
    }
    if (vehicle.initial_budget_kwh > vehicle.battery_capacity_kwh) {
        raise(Errc::invalid_instance, "budget exceeds battery capacity");
    }

    Rng rng(seed);
    SimulationTrace trace;
    trace.route = realize_route(network, history, vehicle, rng);
    const Route& route = network.route(trace.route);

    // The benchmark policy fixes one uniform fraction at the origin, sized
    // against the maximum observed energies of the whole realized route.
    double none_opt_fraction = 0.0;
    if (vehicle.policy == Policy::NoneOpt) {
        double route_max_energy = 0.0;
        for (const SegmentId& segment : route.segments) {
            route_max_energy += model_energy(history, segment, EnergyModel::Max);
        }
        none_opt_fraction = route_max_energy > 0.0
                                ? std::min(1.0, vehicle.initial_budget_kwh / route_max_energy)
                                : 1.0;
    }

    double soc = vehicle.battery_capacity_kwh;
    double remaining = vehicle.initial_budget_kwh;

    for (std::size_t step = 0; step < route.segments.size(); ++step) {
        const SegmentId& current = route.segments[step];
        const double time_s = static_cast<double>(step) * context.step_duration_s;

        const SegmentPrediction prediction =
            predict(context.predictor, history, network, current);
        const auto instances = build_instances(prediction, history, density, context,
                                               vehicle.energy_model, time_s);

        AllocationPlan plan;
        if (vehicle.policy == Policy::NoneOpt) {
            for (const SegmentInstance& inst : instances) plan.x[inst.id] = 0.0;
            for (auto it = route.segments.begin() + static_cast<std::ptrdiff_t>(step);
                 it != route.segments.end(); ++it) {
                plan.x[*it] = none_opt_fraction;
            }
            plan.status = PlanStatus::Optimal;
        } else {
            const auto suffixes = route_suffixes(network, prediction.route_probs, current);
            plan = solve_policy(vehicle.policy, instances, suffixes, context, remaining);
        }

        double x = plan.x.at(current);
        double realized_energy;
        if (vehicle.realization == EnergyRealization::Model) {
            realized_energy = model_energy(history, current, vehicle.energy_model);
        } else {
            auto samples = history.energy_samples().find(current);
            if (samples == history.energy_samples().end() || samples->second.empty()) {
                raise(Errc::no_samples, "no energy samples for segment '" + current + "'");
            }
            realized_energy = samples->second[rng.index(samples->second.size())];
        }
        double spend = x * realized_energy;
        if (spend > remaining) {
            // Hard budget clamp: the battery allocation can never go
            // negative, so the final segment drains it exactly.
            x = realized_energy > 0.0 ? remaining / realized_energy : 0.0;
            spend = remaining;
        }
        soc -= spend;
        remaining -= spend;

        const double d = density.density(current, time_s);
        StepRecord record;
        record.step = step;
        record.segment = current;
        record.soc_kwh = soc;
        record.x_applied = x;
        record.electric_kwh = spend;
        record.clean_air = d * x;
        record.pollutant_units = d * (1.0 - x);
        trace.steps.push_back(record);
        trace.replans.push_back(std::move(plan));

        const double mean_e = history.expected_energy(current).mean_kwh;
        trace.objective_contribs.push_back(d * mean_e * x);
        trace.cumulative_objective += trace.objective_contribs.back();
        trace.total_electric_kwh += spend;
    }
    return trace;
}

FleetTrace run_fleet(const RoadNetwork& network, const TripHistory& history,
                     const std::vector<VehicleConfig>& vehicles,
                     const DensityProvider& density, const SimulationContext& context,
                     std::uint64_t seed) {
    if (vehicles.empty()) {
        raise(Errc::empty_instances, "fleet has no vehicles");
    }

    FleetTrace trace;
    std::vector<std::vector<SegmentInstance>> instance_sets;
    std::vector<double> budgets;
    std::vector<RouteId> routes;

    for (std::size_t v = 0; v < vehicles.size(); ++v) {
        const VehicleConfig& vehicle = vehicles[v];
        if (vehicle.initial_budget_kwh < 0.0) {
            raise(Errc::negative_budget, "initial budget must be >= 0");
        }
        Rng rng(hash_combine(seed, "vehicle_" + std::to_string(v)));
        const RouteId route = realize_route(network, history, vehicle, rng);
        const SegmentId origin = network.route(route).segments.front();
        const SegmentPrediction prediction =
            predict(context.predictor, history, network, origin);
        instance_sets.push_back(build_instances(prediction, history, density, context,
                                                vehicle.energy_model, 0.0));
        budgets.push_back(vehicle.initial_budget_kwh);
        routes.push_back(route);
    }

    if (!context.caps.empty()) {
        FleetAllocation joint = solve_capped_fleet(instance_sets, budgets, context.caps);
        trace.plans = std::move(joint.plans);
        trace.status = joint.status;
        trace.max_cap_violation = joint.max_cap_violation;
        trace.pollutant_units = std::move(joint.pollutant_units);
        trace.clean_air_units = std::move(joint.clean_air_units);
    } else {
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            const VehicleConfig& vehicle = vehicles[v];
            AllocationPlan plan;
            if (vehicle.policy == Policy::NoneOpt) {
                std::vector<SegmentInstance> route_instances;
                for (const SegmentId& segment : network.route(routes[v]).segments) {
                    SegmentInstance inst;
                    inst.id = segment;
                    inst.density = density.density(segment, 0.0);
                    inst.energy_kwh = model_energy(history, segment, EnergyModel::Max);
                    route_instances.push_back(std::move(inst));
                }
                plan = none_opt_plan(route_instances, vehicle.initial_budget_kwh);
            } else {
                const auto suffixes =
                    route_suffixes(network,
                                   route_probabilities(history, network,
                                                       network.route(routes[v]).segments.front()),
                                   network.route(routes[v]).segments.front());
                plan = solve_policy(vehicle.policy, instance_sets[v], suffixes, context,
                                    vehicle.initial_budget_kwh);
            }
            trace.plans.push_back(std::move(plan));
        }
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            for (const SegmentInstance& inst : instance_sets[v]) {
                if (inst.probability <= 0.0) continue;
                auto it = trace.plans[v].x.find(inst.id);
                const double x = it == trace.plans[v].x.end() ? 0.0 : it->second;
                trace.pollutant_units[inst.id] += inst.density * (1.0 - x);
                trace.clean_air_units[inst.id] += inst.density * x;
            }
        }
    }

    for (std::size_t v = 0; v < vehicles.size(); ++v) {
        for (const SegmentInstance& inst : instance_sets[v]) {
            if (inst.probability > 0.0) trace.vehicles_per_segment[inst.id] += 1;
        }
    }
    return trace;
}

std::vector<ComparisonRow> compare_scenarios(const RoadNetwork& network,
                                             const TripHistory& history,
                                             const VehicleConfig& base,
                                             const std::vector<ScenarioVariant>& variants,
                                             const DensityProvider& density,
                                             const SimulationContext& context,
                                             std::uint64_t seed) {
    std::vector<ComparisonRow> rows;
    for (const ScenarioVariant& variant : variants) {
        VehicleConfig vehicle = base;
        vehicle.policy = variant.policy;
        vehicle.energy_model = variant.energy_model;
        vehicle.realization = variant.realization;
        const SimulationTrace trace =
            run_single(network, history, vehicle, density, context, seed);
        double cum_electric = 0.0;
        double cum_objective = 0.0;
        double cum_clean_air = 0.0;
        for (std::size_t i = 0; i < trace.steps.size(); ++i) {
            const StepRecord& record = trace.steps[i];
            cum_electric += record.electric_kwh;
            cum_objective += trace.objective_contribs[i];
            cum_clean_air += record.clean_air;
            rows.push_back(ComparisonRow{variant.name, record.step, record.segment,
                                         record.soc_kwh, record.x_applied, cum_electric,
                                         cum_objective, cum_clean_air});
        }
    }
    return rows;
}

SweepResult sweep_budgets(const RoadNetwork& network, const TripHistory& history,
                          const SegmentId& at, double max_budget_kwh, std::size_t n,
                          Policy policy, EnergyModel energy_model,
                          const DensityProvider& density, const SimulationContext& context) {
    if (max_budget_kwh < 0.0) {
        raise(Errc::negative_budget, "sweep budget must be >= 0");
    }
    if (n == 0) {
        raise(Errc::invalid_instance, "sweep needs at least one budget");
    }
    if (policy != Policy::Expected && policy != Policy::Flow) {
        raise(Errc::invalid_instance, "sweep supports the expected and flow problems");
    }

    const SegmentPrediction prediction = predict(context.predictor, history, network, at);
    const auto instances =
        build_instances(prediction, history, density, context, energy_model, 0.0);

    SweepResult result;
    result.at = at;
    for (const SegmentInstance& inst : instances) {
        result.densities[inst.id] = inst.density;
        result.x_by_segment[inst.id] = {};
    }
    for (std::size_t k = 1; k <= n; ++k) {
        const double budget = max_budget_kwh * static_cast<double>(k) / static_cast<double>(n);
        result.budgets_kwh.push_back(budget);
        const AllocationPlan plan = policy == Policy::Flow ? solve_flow(instances, budget)
                                                           : solve_expected(instances, budget);
        for (const auto& [segment, x] : plan.x) {
            result.x_by_segment[segment].push_back(x);
        }
    }
    for (const auto& [segment, values] : result.x_by_segment) {
        double sum = 0.0;
        for (double v : values) sum += v;
        result.mean_x[segment] = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
    }
    return result;
}

}  // namespace phevsim

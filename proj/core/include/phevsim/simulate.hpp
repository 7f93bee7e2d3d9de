#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "phevsim/density.hpp"
#include "phevsim/history.hpp"
#include "phevsim/optimize.hpp"
#include "phevsim/prediction.hpp"
#include "phevsim/road_network.hpp"

namespace phevsim {

enum class Policy { Expected, Robust, Flow, GreenZone, NoneOpt };
enum class EnergyModel { Mean, Max };
enum class EnergyRealization { Model, Sampled };

std::string_view to_string(Policy policy) noexcept;
std::string_view to_string(EnergyModel model) noexcept;
std::string_view to_string(EnergyRealization realization) noexcept;

struct VehicleConfig {
    double battery_capacity_kwh = 4.4;
    double initial_budget_kwh = 0.0;
    Policy policy = Policy::Expected;
    EnergyModel energy_model = EnergyModel::Mean;
    EnergyRealization realization = EnergyRealization::Model;
    std::optional<RouteId> route;     // realized route; sampled when absent
    std::optional<SegmentId> origin;  // sampling point when route is absent
};

/// Scenario-level inputs shared by every vehicle and policy.
struct SimulationContext {
    std::map<SegmentId, double> flows;  // steady-state vehicle counts; empty -> f = 1
    std::set<SegmentId> green_segments;
    GreenZoneBase green_base = GreenZoneBase::Expected;
    std::map<SegmentId, double> caps;  // fleet pollutant caps; empty -> uncapped
    PredictorKind predictor = PredictorKind::Counts;
    double step_duration_s = 1.0;  // density poll time per segment boundary
};

struct StepRecord {
    std::size_t step = 0;
    SegmentId segment;
    double soc_kwh = 0.0;          // battery state after the segment
    double x_applied = 0.0;        // electric fraction actually driven
    double electric_kwh = 0.0;     // realized electric energy
    double clean_air = 0.0;        // d * x
    double pollutant_units = 0.0;  // d * (1 - x)
};

struct SimulationTrace {
    RouteId route;
    std::vector<StepRecord> steps;
    std::vector<AllocationPlan> replans;  // plan solved at each boundary
    /// Per-step objective contribution d * mean_e * x. The mean historical
    /// energy is the common yardstick so scenarios with different energy
    /// models stay comparable.
    std::vector<double> objective_contribs;
    double cumulative_objective = 0.0;
    double total_electric_kwh = 0.0;
};

/// Drives the vehicle segment-by-segment along its realized route,
/// re-predicting, refreshing densities and re-solving the policy's problem
/// at every boundary, then applying the fraction for the current segment
/// clamped so realized electric energy never exceeds the remaining budget.
/// Deterministic given the seed.
SimulationTrace run_single(const RoadNetwork& network, const TripHistory& history,
                           const VehicleConfig& vehicle, const DensityProvider& density,
                           const SimulationContext& context, std::uint64_t seed);

struct FleetTrace {
    std::vector<AllocationPlan> plans;  // per vehicle
    std::map<SegmentId, double> pollutant_units;
    std::map<SegmentId, double> clean_air_units;
    std::map<SegmentId, std::size_t> vehicles_per_segment;
    PlanStatus status = PlanStatus::Optimal;
    double max_cap_violation = 0.0;
};

/// One steady-state fleet epoch: every vehicle solves its policy at its
/// origin (jointly when caps are set) and per-segment pollutant and
/// clean-air units are aggregated over the traversing vehicles.
FleetTrace run_fleet(const RoadNetwork& network, const TripHistory& history,
                     const std::vector<VehicleConfig>& vehicles,
                     const DensityProvider& density, const SimulationContext& context,
                     std::uint64_t seed);

struct ScenarioVariant {
    std::string name;
    Policy policy = Policy::Expected;
    EnergyModel energy_model = EnergyModel::Mean;
    EnergyRealization realization = EnergyRealization::Model;
};

struct ComparisonRow {
    std::string scenario;
    std::size_t step = 0;
    SegmentId segment;
    double soc_kwh = 0.0;
    double x_applied = 0.0;
    double cum_electric_kwh = 0.0;
    double cum_objective = 0.0;
    double cum_clean_air = 0.0;
};

/// Runs the base vehicle once per variant over shared inputs and emits the
/// per-step series behind the scenario-comparison plots.
std::vector<ComparisonRow> compare_scenarios(const RoadNetwork& network,
                                             const TripHistory& history,
                                             const VehicleConfig& base,
                                             const std::vector<ScenarioVariant>& variants,
                                             const DensityProvider& density,
                                             const SimulationContext& context,
                                             std::uint64_t seed);

struct SweepResult {
    SegmentId at;
    std::vector<double> budgets_kwh;
    /// x per segment, one entry per budget, segments keyed alphabetically.
    std::map<SegmentId, std::vector<double>> x_by_segment;
    std::map<SegmentId, double> mean_x;
    std::map<SegmentId, double> densities;
};

/// One-shot allocation at a fixed segment for n budgets linearly spaced
/// over (0, max_budget]: budget_k = max_budget * k / n, k = 1..n.
SweepResult sweep_budgets(const RoadNetwork& network, const TripHistory& history,
                          const SegmentId& at, double max_budget_kwh, std::size_t n,
                          Policy policy, EnergyModel energy_model,
                          const DensityProvider& density, const SimulationContext& context);

}  // namespace phevsim

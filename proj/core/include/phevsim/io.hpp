#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "phevsim/density.hpp"
#include "phevsim/history.hpp"
#include "phevsim/optimize.hpp"
#include "phevsim/prediction.hpp"
#include "phevsim/road_network.hpp"
#include "phevsim/simulate.hpp"

namespace phevsim::io {

/// Reproducibility record embedded verbatim in every output summary.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::string version;
};

// ---- input files -----------------------------------------------------

RoadNetwork load_network(const std::filesystem::path& path);
void save_network(const RoadNetwork& network, const std::filesystem::path& path);

TripHistory load_history(const std::filesystem::path& path, const RoadNetwork& network);
void save_history(const TripHistory& history, const std::filesystem::path& path);

/// One-shot optimization input: segments with p/d/e/f, a budget, optional
/// route constraint sets and optional pollutant caps.
struct InstanceFile {
    std::vector<SegmentInstance> segments;
    double budget_kwh = 0.0;
    std::vector<std::vector<SegmentId>> routes;
    std::map<SegmentId, double> caps;
};
InstanceFile load_instance(const std::filesystem::path& path);
void save_instance(const InstanceFile& instance, const std::filesystem::path& path);

std::map<SegmentId, double> load_static_density(const std::filesystem::path& path);
std::vector<DensitySnapshot> load_density_replay(const std::filesystem::path& path);

/// Builds a provider from a compact spec: "static:<file>", "replay:<file>"
/// or "synthetic:<seed>". Relative file names resolve against base_dir.
std::unique_ptr<DensityProvider> make_density_provider(const std::string& spec,
                                                       const RoadNetwork& network,
                                                       const std::filesystem::path& base_dir);

struct Scenario {
    std::filesystem::path network_path;
    std::filesystem::path history_path;
    std::string density_spec;
    std::vector<VehicleConfig> vehicles;  // "count" entries already expanded
    SimulationContext context;
    std::vector<ScenarioVariant> variants;
    std::uint64_t seed = 0;
};
Scenario load_scenario(const std::filesystem::path& path);

struct ScenarioBundle {
    Scenario scenario;
    RoadNetwork network;
    TripHistory history;
    std::unique_ptr<DensityProvider> density;
};
ScenarioBundle load_scenario_bundle(const std::filesystem::path& path);

// ---- output rendering ------------------------------------------------

/// Prediction report. Probabilities are printed with 6 decimal digits;
/// segment_probs covers every network segment.
std::string prediction_json(const SegmentPrediction& prediction, const RoadNetwork& network,
                            const RunManifest& manifest);

std::string plan_json(const AllocationPlan& plan, const std::vector<SegmentInstance>& instances,
                      const RunManifest& manifest);
void write_plan_csv(const AllocationPlan& plan, const std::vector<SegmentInstance>& instances,
                    const RunManifest& manifest, const std::filesystem::path& path);

void write_trace_csv(const SimulationTrace& trace, const RunManifest& manifest,
                     const std::filesystem::path& path);
std::vector<StepRecord> read_trace_csv(const std::filesystem::path& path);
std::string trace_summary_json(const SimulationTrace& trace, const VehicleConfig& vehicle,
                               const RunManifest& manifest);

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const RunManifest& manifest,
                          const std::filesystem::path& path);

std::string fleet_summary_json(const FleetTrace& trace, const SimulationContext& context,
                               const RunManifest& manifest);
void write_fleet_csv(const FleetTrace& trace, const SimulationContext& context,
                     const RunManifest& manifest, const std::filesystem::path& path);

std::string sweep_summary_json(const SweepResult& result, const RunManifest& manifest);
void write_sweep_csv(const SweepResult& result, const RunManifest& manifest,
                     const std::filesystem::path& path);

// ---- low-level helpers -----------------------------------------------

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace phevsim::io

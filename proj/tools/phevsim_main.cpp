// phevsim: allocates a PHEV's electric-energy budget across the road
// segments it is likely to travel so pedestrian exposure to emissions is
// minimized, and simulates the rolling re-optimization along a route.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phevsim/io.hpp"
#include "phevsim/version.hpp"

namespace fs = std::filesystem;
using namespace phevsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitPrediction = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitInternal = 5;

int exit_code_for(Errc code, bool prediction_context) {
    switch (code) {
        case Errc::no_matching_route:
        case Errc::unknown_state:
            return kExitPrediction;
        case Errc::unknown_segment:
        case Errc::unknown_route:
            return prediction_context ? kExitPrediction : kExitParse;
        case Errc::insufficient_green_budget:
            return kExitInfeasible;
        case Errc::parse_error:
        case Errc::duplicate_id:
        case Errc::empty_route:
        case Errc::empty_network:
        case Errc::non_positive_length:
        case Errc::segment_too_long:
        case Errc::negative_energy:
        case Errc::missing_energy:
        case Errc::capacity_exceeded:
        case Errc::no_samples:
        case Errc::empty_history:
        case Errc::cyclic_routes:
        case Errc::negative_budget:
        case Errc::empty_instances:
        case Errc::invalid_instance:
        case Errc::negative_cap:
        case Errc::negative_weight:
            return kExitParse;
    }
    return kExitInternal;
}

fs::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PHEVSIM_OUTPUT_DIR")) {
        if (*env) return env;
    }
    return ".";
}

io::RunManifest make_manifest(const std::string& command,
                              std::vector<std::string> inputs, std::uint64_t seed,
                              const fs::path& out_dir) {
    io::RunManifest manifest;
    manifest.command = command;
    manifest.inputs = std::move(inputs);
    manifest.seed = seed;
    manifest.output_dir = out_dir.string();
    manifest.version = std::string(kVersion);
    return manifest;
}

std::map<SegmentId, double> parse_assignments(const std::vector<std::string>& entries,
                                              const char* what) {
    std::map<SegmentId, double> out;
    for (const std::string& entry : entries) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            raise(Errc::parse_error, std::string(what) + " expects segment=value, got '" + entry + "'");
        }
        out[entry.substr(0, eq)] = io::parse_double(entry.substr(eq + 1));
    }
    return out;
}

struct CommonScenarioFlags {
    std::string scenario_file;
    std::string out;
    std::string density_override;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

io::ScenarioBundle load_bundle(const CommonScenarioFlags& flags) {
    io::ScenarioBundle bundle = io::load_scenario_bundle(flags.scenario_file);
    if (!flags.density_override.empty()) {
        const fs::path base = fs::path(flags.scenario_file).has_parent_path()
                                  ? fs::path(flags.scenario_file).parent_path()
                                  : fs::path(".");
        bundle.density =
            io::make_density_provider(flags.density_override, bundle.network, base);
        bundle.scenario.density_spec = flags.density_override;
    }
    if (flags.seed_set) bundle.scenario.seed = flags.seed;
    return bundle;
}

int cmd_validate(const std::string& network_file, const std::string& history_file) {
    const RoadNetwork network = io::load_network(network_file);
    std::cout << "network ok: " << network.segments().size() << " segments, "
              << network.routes().size() << " routes\n";
    if (!history_file.empty()) {
        const TripHistory history = io::load_history(history_file, network);
        std::cout << "history ok: " << history.route_counts().size() << " routes, capacity "
                  << history.capacity() << "\n";
    }
    return kExitOk;
}

int cmd_synth(const std::string& network_file, const std::vector<std::string>& counts_args,
              std::uint64_t seed, double lo, double hi, const std::string& out_file) {
    const RoadNetwork network = io::load_network(network_file);
    std::map<RouteId, std::uint64_t> counts;
    for (const auto& [route, value] : parse_assignments(counts_args, "--counts")) {
        counts[route] = static_cast<std::uint64_t>(value);
    }
    const TripHistory history = make_synthetic_history(network, counts, seed, lo, hi);
    io::save_history(history, out_file);
    std::cout << "wrote " << out_file << "\n";
    return kExitOk;
}

int cmd_predict(const std::string& network_file, const std::string& history_file,
                const std::string& at, const std::string& predictor,
                const std::string& out_file, const std::string& out_flag) {
    const RoadNetwork network = io::load_network(network_file);
    const TripHistory history = io::load_history(history_file, network);
    const PredictorKind kind =
        predictor == "markov" ? PredictorKind::Markov : PredictorKind::Counts;

    SegmentPrediction prediction;
    try {
        prediction = predict(kind, history, network, at);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code(), /*prediction_context=*/true);
    }
    const io::RunManifest manifest = make_manifest(
        "predict", {network_file, history_file}, 0, output_dir(out_flag));
    const std::string json = io::prediction_json(prediction, network, manifest);
    std::cout << json;
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        out << json;
    }
    return kExitOk;
}

int cmd_optimize(const std::string& instance_file, int problem, double budget_flag,
                 bool budget_set, const std::vector<std::string>& green,
                 const std::string& out_file, const std::string& csv_file,
                 const std::string& out_flag) {
    io::InstanceFile instance = io::load_instance(instance_file);
    const double budget = budget_set ? budget_flag : instance.budget_kwh;

    AllocationPlan plan;
    std::set<SegmentId> green_set(green.begin(), green.end());
    if (!green_set.empty()) {
        if (problem == 2) {
            raise(Errc::parse_error, "--green works with problems 1 and 3");
        }
        plan = solve_green_zone(instance.segments, green_set, budget,
                                problem == 3 ? GreenZoneBase::Flow : GreenZoneBase::Expected);
    } else if (problem == 1) {
        plan = solve_expected(instance.segments, budget);
    } else if (problem == 2) {
        if (instance.routes.empty()) {
            raise(Errc::parse_error, "problem 2 needs 'routes' in the instance file");
        }
        plan = solve_robust(instance.segments, instance.routes, budget);
    } else {
        plan = solve_flow(instance.segments, budget);
    }

    const io::RunManifest manifest =
        make_manifest("optimize", {instance_file}, 0, output_dir(out_flag));
    const std::string json = io::plan_json(plan, instance.segments, manifest);
    std::cout << json;
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        out << json;
    }
    if (!csv_file.empty()) {
        io::write_plan_csv(plan, instance.segments, manifest, csv_file);
    }
    return kExitOk;
}

int cmd_simulate(const CommonScenarioFlags& flags, std::size_t vehicle_index) {
    const io::ScenarioBundle bundle = load_bundle(flags);
    if (vehicle_index >= bundle.scenario.vehicles.size()) {
        raise(Errc::parse_error, "scenario has no vehicle #" + std::to_string(vehicle_index));
    }
    const VehicleConfig& vehicle = bundle.scenario.vehicles[vehicle_index];
    const fs::path dir = output_dir(flags.out);
    const io::RunManifest manifest = make_manifest(
        "simulate", {flags.scenario_file}, bundle.scenario.seed, dir);

    const SimulationTrace trace =
        run_single(bundle.network, bundle.history, vehicle, *bundle.density,
                   bundle.scenario.context, bundle.scenario.seed);
    io::write_trace_csv(trace, manifest, dir / "trace.csv");
    const std::string summary = io::trace_summary_json(trace, vehicle, manifest);
    std::ofstream(dir / "summary.json") << summary;
    std::cout << summary;

    if (!bundle.scenario.variants.empty()) {
        const auto rows = compare_scenarios(bundle.network, bundle.history, vehicle,
                                            bundle.scenario.variants, *bundle.density,
                                            bundle.scenario.context, bundle.scenario.seed);
        io::write_comparison_csv(rows, manifest, dir / "comparison.csv");
    }
    return kExitOk;
}

int cmd_fleet(const CommonScenarioFlags& flags, const std::string& policy_override,
              double budget_flag, bool budget_set,
              const std::vector<std::string>& cap_args,
              const std::vector<std::string>& green_args, bool drop_caps) {
    io::ScenarioBundle bundle = load_bundle(flags);
    std::vector<VehicleConfig> vehicles = bundle.scenario.vehicles;
    if (!policy_override.empty()) {
        for (VehicleConfig& vehicle : vehicles) {
            if (policy_override == "expected") vehicle.policy = Policy::Expected;
            else if (policy_override == "robust") vehicle.policy = Policy::Robust;
            else if (policy_override == "flow") vehicle.policy = Policy::Flow;
            else if (policy_override == "green_zone") vehicle.policy = Policy::GreenZone;
            else if (policy_override == "none_opt") vehicle.policy = Policy::NoneOpt;
            else raise(Errc::parse_error, "unknown policy '" + policy_override + "'");
        }
    }
    if (budget_set) {
        for (VehicleConfig& vehicle : vehicles) vehicle.initial_budget_kwh = budget_flag;
    }
    SimulationContext context = bundle.scenario.context;
    if (drop_caps) context.caps.clear();
    if (!cap_args.empty()) context.caps = parse_assignments(cap_args, "--cap");
    if (!green_args.empty()) {
        context.green_segments = std::set<SegmentId>(green_args.begin(), green_args.end());
    }

    const fs::path dir = output_dir(flags.out);
    const io::RunManifest manifest =
        make_manifest("fleet", {flags.scenario_file}, bundle.scenario.seed, dir);
    const FleetTrace trace = run_fleet(bundle.network, bundle.history, vehicles,
                                       *bundle.density, context, bundle.scenario.seed);
    io::write_fleet_csv(trace, context, manifest, dir / "fleet.csv");
    const std::string summary = io::fleet_summary_json(trace, context, manifest);
    std::ofstream(dir / "fleet_summary.json") << summary;
    std::cout << summary;
    return kExitOk;
}

int cmd_sweep(const CommonScenarioFlags& flags, std::string at, std::size_t budgets,
              double max_budget_flag, bool max_budget_set, int problem) {
    const io::ScenarioBundle bundle = load_bundle(flags);
    if (bundle.scenario.vehicles.empty()) {
        raise(Errc::parse_error, "scenario has no vehicles");
    }
    const VehicleConfig& vehicle = bundle.scenario.vehicles.front();
    if (at.empty()) {
        if (vehicle.route) {
            at = bundle.network.route(*vehicle.route).segments.front();
        } else if (vehicle.origin) {
            at = *vehicle.origin;
        } else {
            raise(Errc::parse_error, "--at is required when the vehicle has no route");
        }
    }
    const double max_budget = max_budget_set ? max_budget_flag : vehicle.initial_budget_kwh;

    const fs::path dir = output_dir(flags.out);
    const io::RunManifest manifest =
        make_manifest("sweep", {flags.scenario_file}, bundle.scenario.seed, dir);
    const SweepResult result = sweep_budgets(
        bundle.network, bundle.history, at, max_budget, budgets,
        problem == 3 ? Policy::Flow : Policy::Expected, vehicle.energy_model,
        *bundle.density, bundle.scenario.context);
    io::write_sweep_csv(result, manifest, dir / "sweep.csv");
    const std::string summary = io::sweep_summary_json(result, manifest);
    std::ofstream(dir / "sweep_summary.json") << summary;
    std::cout << summary;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pedestrian-aware PHEV energy allocation and simulation"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "check network and history files");
    std::string network_file;
    std::string history_file;
    validate->add_option("--network", network_file, "network JSON")->required();
    validate->add_option("--history", history_file, "history JSON");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic history");
    std::string synth_network;
    std::vector<std::string> synth_counts;
    std::uint64_t synth_seed = 0;
    double synth_lo = 0.0;
    double synth_hi = 0.05;
    std::string synth_out = "history.json";
    synth->add_option("--network", synth_network, "network JSON")->required();
    synth->add_option("--counts", synth_counts, "route=count assignments")->required();
    synth->add_option("--seed", synth_seed, "RNG seed");
    synth->add_option("--lo", synth_lo, "min energy per segment (kWh)");
    synth->add_option("--hi", synth_hi, "max energy per segment (kWh)");
    synth->add_option("-o,--out", synth_out, "output history file");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "route and segment probabilities");
    std::string predict_network;
    std::string predict_history;
    std::string predict_at;
    std::string predictor = "counts";
    std::string predict_out;
    std::string predict_dir;
    predict_cmd->add_option("--network", predict_network, "network JSON")->required();
    predict_cmd->add_option("--history", predict_history, "history JSON")->required();
    predict_cmd->add_option("--at", predict_at, "current segment id")->required();
    predict_cmd->add_option("--predictor", predictor, "counts|markov")
        ->check(CLI::IsMember({"counts", "markov"}));
    predict_cmd->add_option("--out-file", predict_out, "also write the JSON here");
    predict_cmd->add_option("-o,--out", predict_dir, "output directory");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "solve one allocation problem");
    std::string instance_file;
    int problem = 1;
    double budget = 0.0;
    std::vector<std::string> green;
    std::string plan_out;
    std::string plan_csv;
    std::string optimize_dir;
    optimize->add_option("--instance", instance_file, "instance JSON")->required();
    optimize->add_option("--problem", problem, "1=expected, 2=robust, 3=flow")
        ->check(CLI::IsMember({1, 2, 3}));
    auto* budget_opt = optimize->add_option("--budget", budget, "budget kWh (overrides file)");
    optimize->add_option("--green", green, "green-zone segment ids");
    optimize->add_option("--out-file", plan_out, "also write the plan JSON here");
    optimize->add_option("--csv", plan_csv, "write the plan CSV here");
    optimize->add_option("-o,--out", optimize_dir, "output directory");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "rolling-horizon single-vehicle run");
    CommonScenarioFlags sim_flags;
    std::size_t vehicle_index = 0;
    simulate->add_option("--scenario", sim_flags.scenario_file, "scenario JSON")->required();
    simulate->add_option("-o,--out", sim_flags.out, "output directory");
    simulate->add_option("--density", sim_flags.density_override,
                         "static:<file>|replay:<file>|synthetic:<seed>");
    auto* sim_seed = simulate->add_option("--seed", sim_flags.seed, "override scenario seed");
    simulate->add_option("--vehicle", vehicle_index, "vehicle index in the scenario");

    // fleet
    auto* fleet = app.add_subcommand("fleet", "steady-state fleet epoch");
    CommonScenarioFlags fleet_flags;
    std::string fleet_policy;
    double fleet_budget = 0.0;
    std::vector<std::string> fleet_caps;
    std::vector<std::string> fleet_green;
    bool fleet_no_caps = false;
    fleet->add_option("--scenario", fleet_flags.scenario_file, "scenario JSON")->required();
    fleet->add_option("-o,--out", fleet_flags.out, "output directory");
    fleet->add_option("--density", fleet_flags.density_override, "density override");
    auto* fleet_seed = fleet->add_option("--seed", fleet_flags.seed, "override scenario seed");
    fleet->add_option("--policy", fleet_policy, "override every vehicle's policy");
    auto* fleet_budget_opt =
        fleet->add_option("--budget", fleet_budget, "override every vehicle's budget (kWh)");
    fleet->add_option("--cap", fleet_caps, "segment=units pollutant caps (replaces scenario caps)");
    fleet->add_option("--green", fleet_green, "green segment ids (replaces scenario set)");
    fleet->add_flag("--no-caps", fleet_no_caps, "drop the scenario caps");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "solve across linearly spaced budgets");
    CommonScenarioFlags sweep_flags;
    std::string sweep_at;
    std::size_t sweep_budgets = 1000;
    double sweep_max = 0.0;
    int sweep_problem = 1;
    sweep->add_option("--scenario", sweep_flags.scenario_file, "scenario JSON")->required();
    sweep->add_option("-o,--out", sweep_flags.out, "output directory");
    sweep->add_option("--density", sweep_flags.density_override, "density override");
    auto* sweep_seed = sweep->add_option("--seed", sweep_flags.seed, "override scenario seed");
    sweep->add_option("--at", sweep_at, "segment to predict from (default: route origin)");
    sweep->add_option("--budgets", sweep_budgets, "number of budgets");
    auto* sweep_max_opt =
        sweep->add_option("--max-budget", sweep_max, "largest budget (default: vehicle budget)");
    sweep->add_option("--problem", sweep_problem, "1=expected, 3=flow")
        ->check(CLI::IsMember({1, 3}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(network_file, history_file);
        if (*synth) return cmd_synth(synth_network, synth_counts, synth_seed, synth_lo,
                                     synth_hi, synth_out);
        if (*predict_cmd) return cmd_predict(predict_network, predict_history, predict_at,
                                             predictor, predict_out, predict_dir);
        if (*optimize) return cmd_optimize(instance_file, problem, budget,
                                           budget_opt->count() > 0, green, plan_out, plan_csv,
                                           optimize_dir);
        if (*simulate) {
            sim_flags.seed_set = sim_seed->count() > 0;
            return cmd_simulate(sim_flags, vehicle_index);
        }
        if (*fleet) {
            fleet_flags.seed_set = fleet_seed->count() > 0;
            return cmd_fleet(fleet_flags, fleet_policy, fleet_budget,
                             fleet_budget_opt->count() > 0, fleet_caps, fleet_green,
                             fleet_no_caps);
        }
        if (*sweep) {
            sweep_flags.seed_set = sweep_seed->count() > 0;
            return cmd_sweep(sweep_flags, sweep_at, sweep_budgets, sweep_max,
                             sweep_max_opt->count() > 0, sweep_problem);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code(), /*prediction_context=*/false);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

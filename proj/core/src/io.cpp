#include "phevsim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phevsim/version.hpp"

namespace phevsim::io {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::parse_error, "cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        raise(Errc::parse_error, "cannot write '" + path.string() + "'");
    }
    out << text;
}

double round6(double p) { return std::round(p * 1e6) / 1e6; }

json manifest_json(const RunManifest& manifest) {
    return json{{"command", manifest.command},
                {"inputs", manifest.inputs},
                {"seed", manifest.seed},
                {"output_dir", manifest.output_dir},
                {"version", manifest.version.empty() ? std::string(kVersion) : manifest.version}};
}

std::string csv_header_comment(const RunManifest& manifest) {
    return "# phevsim manifest: " + manifest_json(manifest).dump() + "\n";
}

Policy parse_policy(const std::string& text) {
    if (text == "expected") return Policy::Expected;
    if (text == "robust") return Policy::Robust;
    if (text == "flow") return Policy::Flow;
    if (text == "green_zone") return Policy::GreenZone;
    if (text == "none_opt") return Policy::NoneOpt;
    raise(Errc::parse_error, "unknown policy '" + text + "'");
}

EnergyModel parse_energy_model(const std::string& text) {
    if (text == "mean") return EnergyModel::Mean;
    if (text == "max") return EnergyModel::Max;
    raise(Errc::parse_error, "unknown energy model '" + text + "'");
}

EnergyRealization parse_realization(const std::string& text) {
    if (text == "model") return EnergyRealization::Model;
    if (text == "sampled") return EnergyRealization::Sampled;
    raise(Errc::parse_error, "unknown realization '" + text + "'");
}

PredictorKind parse_predictor(const std::string& text) {
    if (text == "counts") return PredictorKind::Counts;
    if (text == "markov") return PredictorKind::Markov;
    raise(Errc::parse_error, "unknown predictor '" + text + "'");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

std::map<SegmentId, double> segment_value_map(const json& j, const char* what) {
    std::map<SegmentId, double> out;
    if (!j.is_object()) {
        raise(Errc::parse_error, std::string(what) + " must be an object of segment -> value");
    }
    for (const auto& [key, value] : j.items()) {
        out[key] = value.get<double>();
    }
    return out;
}

}  // namespace

RoadNetwork load_network(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        std::vector<Segment> segments;
        for (const json& s : j.at("segments")) {
            segments.push_back(Segment{s.at("id").get<std::string>(), s.at("length_m").get<double>()});
        }
        std::vector<Route> routes;
        for (const json& r : j.at("routes")) {
            Route route;
            route.id = r.at("id").get<std::string>();
            for (const json& sid : r.at("segment_ids")) {
                route.segments.push_back(sid.get<std::string>());
            }
            routes.push_back(std::move(route));
        }
        const double max_len =
            get_or(j, "max_segment_length_m", RoadNetwork::kDefaultMaxSegmentLength);
        return RoadNetwork(std::move(segments), std::move(routes), max_len);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, path.string() + ": " + e.what());
    }
}

void save_network(const RoadNetwork& network, const std::filesystem::path& path) {
    json j;
    j["max_segment_length_m"] = network.max_segment_length();
    j["segments"] = json::array();
    for (const Segment& s : network.segments()) {
        j["segments"].push_back({{"id", s.id}, {"length_m", s.length_m}});
    }
    j["routes"] = json::array();
    for (const Route& r : network.routes()) {
        j["routes"].push_back({{"id", r.id}, {"segment_ids", r.segments}});
    }
    write_text_file(path, j.dump(2) + "\n");
}

TripHistory load_history(const std::filesystem::path& path, const RoadNetwork& network) {
    const json j = read_json_file(path);
    try {
        std::map<RouteId, std::uint64_t> counts;
        for (const json& t : j.at("trips")) {
            counts[t.at("route_id").get<std::string>()] = t.at("count").get<std::uint64_t>();
        }
        std::map<SegmentId, std::vector<double>> samples;
        for (const json& s : get_or(j, "energy_samples", json::array())) {
            samples[s.at("segment_id").get<std::string>()] =
                s.at("kwh").get<std::vector<double>>();
        }
        const auto capacity = get_or<std::size_t>(j, "capacity", TripHistory::kDefaultCapacity);
        return TripHistory::from_counts(network, counts, samples, capacity);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, path.string() + ": " + e.what());
    }
}

void save_history(const TripHistory& history, const std::filesystem::path& path) {
    json j;
    j["capacity"] = history.capacity();
    j["trips"] = json::array();
    for (const auto& [route, count] : history.route_counts()) {
        j["trips"].push_back({{"route_id", route}, {"count", count}});
    }
    j["energy_samples"] = json::array();
    for (const auto& [segment, samples] : history.energy_samples()) {
        j["energy_samples"].push_back({{"segment_id", segment}, {"kwh", samples}});
    }
    write_text_file(path, j.dump(2) + "\n");
}

InstanceFile load_instance(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        InstanceFile out;
        out.budget_kwh = j.at("budget_kwh").get<double>();
        for (const json& s : j.at("segments")) {
            SegmentInstance inst;
            inst.id = s.at("id").get<std::string>();
            inst.probability = get_or(s, "p", 1.0);
            inst.density = s.at("d").get<double>();
            inst.energy_kwh = s.at("e").get<double>();
            inst.flow = get_or(s, "f", 1.0);
            out.segments.push_back(std::move(inst));
        }
        for (const json& route : get_or(j, "routes", json::array())) {
            out.routes.push_back(route.get<std::vector<SegmentId>>());
        }
        if (j.contains("caps")) {
            out.caps = segment_value_map(j.at("caps"), "caps");
        }
        return out;
    } catch (const json::exception& e) {
        raise(Errc::parse_error, path.string() + ": " + e.what());
    }
}

void save_instance(const InstanceFile& instance, const std::filesystem::path& path) {
    json j;
    j["budget_kwh"] = instance.budget_kwh;
    j["segments"] = json::array();
    for (const SegmentInstance& inst : instance.segments) {
        j["segments"].push_back({{"id", inst.id},
                                 {"p", inst.probability},
                                 {"d", inst.density},
                                 {"e", inst.energy_kwh},
                                 {"f", inst.flow}});
    }
    if (!instance.routes.empty()) j["routes"] = instance.routes;
    if (!instance.caps.empty()) {
        j["caps"] = json::object();
        for (const auto& [segment, cap] : instance.caps) j["caps"][segment] = cap;
    }
    write_text_file(path, j.dump(2) + "\n");
}

std::map<SegmentId, double> load_static_density(const std::filesystem::path& path) {
    return segment_value_map(read_json_file(path), "density table");
}

std::vector<DensitySnapshot> load_density_replay(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::parse_error, "cannot open '" + path.string() + "'");
    }
    std::vector<DensitySnapshot> snapshots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        try {
            const json j = json::parse(line);
            DensitySnapshot snapshot;
            snapshot.time_s = j.at("t").get<double>();
            snapshot.counts = segment_value_map(j.at("counts"), "counts");
            snapshots.push_back(std::move(snapshot));
        } catch (const json::exception& e) {
            raise(Errc::parse_error,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return snapshots;
}

std::unique_ptr<DensityProvider> make_density_provider(const std::string& spec,
                                                       const RoadNetwork& network,
                                                       const std::filesystem::path& base_dir) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        raise(Errc::parse_error, "density spec must look like kind:argument, got '" + spec + "'");
    }
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    auto resolve = [&](const std::string& file) {
        std::filesystem::path p(file);
        return p.is_absolute() ? p : base_dir / p;
    };
    if (kind == "static") {
        return std::make_unique<StaticDensityProvider>(network,
                                                       load_static_density(resolve(arg)));
    }
    if (kind == "replay") {
        return std::make_unique<ReplayDensityProvider>(network,
                                                       load_density_replay(resolve(arg)));
    }
    if (kind == "synthetic") {
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), seed);
        if (ec != std::errc() || ptr != arg.data() + arg.size()) {
            raise(Errc::parse_error, "synthetic density needs a numeric seed, got '" + arg + "'");
        }
        return std::make_unique<SyntheticDensityProvider>(network, seed);
    }
    raise(Errc::parse_error, "unknown density kind '" + kind + "'");
}

Scenario load_scenario(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");
    try {
        Scenario scenario;
        auto resolve = [&](const std::string& file) {
            std::filesystem::path p(file);
            return p.is_absolute() ? p : base / p;
        };
        scenario.network_path = resolve(j.at("network").get<std::string>());
        scenario.history_path = resolve(j.at("history").get<std::string>());
        scenario.density_spec = j.at("density").get<std::string>();
        scenario.seed = get_or<std::uint64_t>(j, "seed", 0);
        scenario.context.step_duration_s = get_or(j, "step_duration_s", 1.0);
        scenario.context.predictor =
            parse_predictor(get_or<std::string>(j, "predictor", "counts"));
        if (j.contains("flows")) {
            scenario.context.flows = segment_value_map(j.at("flows"), "flows");
        }
        if (j.contains("caps")) {
            scenario.context.caps = segment_value_map(j.at("caps"), "caps");
        }
        for (const json& sid : get_or(j, "green_segments", json::array())) {
            scenario.context.green_segments.insert(sid.get<std::string>());
        }
        const std::string base_kind = get_or<std::string>(j, "green_base", "expected");
        if (base_kind == "expected") {
            scenario.context.green_base = GreenZoneBase::Expected;
        } else if (base_kind == "flow") {
            scenario.context.green_base = GreenZoneBase::Flow;
        } else {
            raise(Errc::parse_error, "unknown green_base '" + base_kind + "'");
        }
        for (const json& v : j.at("vehicles")) {
            VehicleConfig vehicle;
            vehicle.battery_capacity_kwh = get_or(v, "battery_kwh", 4.4);
            vehicle.initial_budget_kwh = v.at("budget_kwh").get<double>();
            vehicle.policy = parse_policy(get_or<std::string>(v, "policy", "expected"));
            vehicle.energy_model =
                parse_energy_model(get_or<std::string>(v, "energy_model", "mean"));
            vehicle.realization =
                parse_realization(get_or<std::string>(v, "realization", "model"));
            if (v.contains("route")) vehicle.route = v.at("route").get<std::string>();
            if (v.contains("origin")) vehicle.origin = v.at("origin").get<std::string>();
            const auto copies = get_or<std::size_t>(v, "count", 1);
            for (std::size_t c = 0; c < copies; ++c) scenario.vehicles.push_back(vehicle);
        }
        for (const json& v : get_or(j, "variants", json::array())) {
            ScenarioVariant variant;
            variant.name = v.at("name").get<std::string>();
            variant.policy = parse_policy(get_or<std::string>(v, "policy", "expected"));
            variant.energy_model =
                parse_energy_model(get_or<std::string>(v, "energy_model", "mean"));
            variant.realization =
                parse_realization(get_or<std::string>(v, "realization", "model"));
            scenario.variants.push_back(std::move(variant));
        }
        return scenario;
    } catch (const json::exception& e) {
        raise(Errc::parse_error, path.string() + ": " + e.what());
    }
}

ScenarioBundle load_scenario_bundle(const std::filesystem::path& path) {
    Scenario scenario = load_scenario(path);
    RoadNetwork network = load_network(scenario.network_path);
    TripHistory history = load_history(scenario.history_path, network);
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");
    auto density = make_density_provider(scenario.density_spec, network, base);
    return ScenarioBundle{std::move(scenario), std::move(network), std::move(history),
                          std::move(density)};
}

std::string prediction_json(const SegmentPrediction& prediction, const RoadNetwork& network,
                            const RunManifest& manifest) {
    json j;
    j["manifest"] = manifest_json(manifest);
    j["current"] = prediction.current;
    j["route_probs"] = json::object();
    for (const auto& [route, p] : prediction.route_probs) {
        j["route_probs"][route] = round6(p);
    }
    j["segment_probs"] = json::object();
    for (const Segment& segment : network.segments()) {
        auto it = prediction.segment_probs.find(segment.id);
        j["segment_probs"][segment.id] = round6(it == prediction.segment_probs.end() ? 0.0 : it->second);
    }
    return j.dump(2) + "\n";
}

namespace {

json plan_body(const AllocationPlan& plan, const std::vector<SegmentInstance>& instances) {
    json j;
    j["status"] = std::string(to_string(plan.status));
    j["objective"] = plan.objective;
    j["budget_used_kwh"] = plan.budget_used;
    j["x"] = json::object();
    for (const auto& [segment, x] : plan.x) j["x"][segment] = x;
    j["segments"] = json::array();
    for (const SegmentInstance& inst : instances) {
        auto it = plan.x.find(inst.id);
        const double x = it == plan.x.end() ? 0.0 : it->second;
        j["segments"].push_back({{"id", inst.id},
                                 {"p", inst.probability},
                                 {"d", inst.density},
                                 {"e", inst.energy_kwh},
                                 {"f", inst.flow},
                                 {"objective_coeff",
                                  inst.probability * inst.density * inst.energy_kwh},
                                 {"constraint_coeff", inst.probability * inst.energy_kwh},
                                 {"x", x}});
    }
    j["constraints"] = json::array();
    for (const ConstraintRow& row : plan.constraints) {
        json coeffs = json::object();
        for (const auto& [segment, coeff] : row.coeffs) coeffs[segment] = coeff;
        j["constraints"].push_back({{"name", row.name},
                                    {"coeffs", coeffs},
                                    {"rhs", row.rhs},
                                    {"lhs", row.lhs(plan.x)},
                                    {"rendered", row.render()}});
    }
    j["binding"] = plan.binding;
    return j;
}

}  // namespace

std::string plan_json(const AllocationPlan& plan, const std::vector<SegmentInstance>& instances,
                      const RunManifest& manifest) {
    json j = plan_body(plan, instances);
    j["manifest"] = manifest_json(manifest);
    return j.dump(2) + "\n";
}

void write_plan_csv(const AllocationPlan& plan, const std::vector<SegmentInstance>& instances,
                    const RunManifest& manifest, const std::filesystem::path& path) {
    std::string out = csv_header_comment(manifest);
    out += "segment_id,p,d,e,f,x,objective_coeff,constraint_coeff\n";
    for (const SegmentInstance& inst : instances) {
        auto it = plan.x.find(inst.id);
        const double x = it == plan.x.end() ? 0.0 : it->second;
        out += inst.id + ',' + format_double(inst.probability) + ',' +
               format_double(inst.density) + ',' + format_double(inst.energy_kwh) + ',' +
               format_double(inst.flow) + ',' + format_double(x) + ',' +
               format_double(inst.probability * inst.density * inst.energy_kwh) + ',' +
               format_double(inst.probability * inst.energy_kwh) + '\n';
    }
    write_text_file(path, out);
}

void write_trace_csv(const SimulationTrace& trace, const RunManifest& manifest,
                     const std::filesystem::path& path) {
    std::string out = csv_header_comment(manifest);
    out += "step,segment_id,soc_kwh,x,electric_kwh,clean_air,pollutant_units\n";
    for (const StepRecord& record : trace.steps) {
        out += std::to_string(record.step) + ',' + record.segment + ',' +
               format_double(record.soc_kwh) + ',' + format_double(record.x_applied) + ',' +
               format_double(record.electric_kwh) + ',' + format_double(record.clean_air) +
               ',' + format_double(record.pollutant_units) + '\n';
    }
    write_text_file(path, out);
}

std::vector<StepRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::parse_error, "cannot open '" + path.string() + "'");
    }
    std::vector<StepRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            raise(Errc::parse_error, path.string() + ": malformed row '" + line + "'");
        }
        StepRecord record;
        record.step = static_cast<std::size_t>(std::stoull(fields[0]));
        record.segment = fields[1];
        record.soc_kwh = parse_double(fields[2]);
        record.x_applied = parse_double(fields[3]);
        record.electric_kwh = parse_double(fields[4]);
        record.clean_air = parse_double(fields[5]);
        record.pollutant_units = parse_double(fields[6]);
        records.push_back(std::move(record));
    }
    return records;
}

std::string trace_summary_json(const SimulationTrace& trace, const VehicleConfig& vehicle,
                               const RunManifest& manifest) {
    double cum_clean_air = 0.0;
    for (const StepRecord& record : trace.steps) cum_clean_air += record.clean_air;
    json j;
    j["manifest"] = manifest_json(manifest);
    j["route"] = trace.route;
    j["policy"] = std::string(to_string(vehicle.policy));
    j["energy_model"] = std::string(to_string(vehicle.energy_model));
    j["realization"] = std::string(to_string(vehicle.realization));
    j["battery_kwh"] = vehicle.battery_capacity_kwh;
    j["initial_budget_kwh"] = vehicle.initial_budget_kwh;
    j["steps"] = trace.steps.size();
    j["total_electric_kwh"] = trace.total_electric_kwh;
    j["cumulative_objective"] = trace.cumulative_objective;
    j["cumulative_clean_air"] = cum_clean_air;
    j["final_soc_kwh"] = trace.steps.empty() ? vehicle.battery_capacity_kwh
                                             : trace.steps.back().soc_kwh;
    return j.dump(2) + "\n";
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const RunManifest& manifest,
                          const std::filesystem::path& path) {
    std::string out = csv_header_comment(manifest);
    out += "scenario,step,segment_id,soc_kwh,x,cum_electric_kwh,cum_objective,cum_clean_air\n";
    for (const ComparisonRow& row : rows) {
        out += row.scenario + ',' + std::to_string(row.step) + ',' + row.segment + ',' +
               format_double(row.soc_kwh) + ',' + format_double(row.x_applied) + ',' +
               format_double(row.cum_electric_kwh) + ',' + format_double(row.cum_objective) +
               ',' + format_double(row.cum_clean_air) + '\n';
    }
    write_text_file(path, out);
}

std::string fleet_summary_json(const FleetTrace& trace, const SimulationContext& context,
                               const RunManifest& manifest) {
    json j;
    j["manifest"] = manifest_json(manifest);
    j["status"] = std::string(to_string(trace.status));
    j["vehicles"] = trace.plans.size();
    j["max_cap_violation"] = trace.max_cap_violation;
    j["pollutant_units"] = json::object();
    for (const auto& [segment, units] : trace.pollutant_units) {
        j["pollutant_units"][segment] = units;
    }
    j["clean_air_units"] = json::object();
    for (const auto& [segment, units] : trace.clean_air_units) {
        j["clean_air_units"][segment] = units;
    }
    j["vehicles_per_segment"] = json::object();
    for (const auto& [segment, count] : trace.vehicles_per_segment) {
        j["vehicles_per_segment"][segment] = count;
    }
    if (!context.caps.empty()) {
        j["caps"] = json::object();
        for (const auto& [segment, cap] : context.caps) j["caps"][segment] = cap;
    }
    return j.dump(2) + "\n";
}

void write_fleet_csv(const FleetTrace& trace, const SimulationContext& context,
                     const RunManifest& manifest, const std::filesystem::path& path) {
    std::string out = csv_header_comment(manifest);
    out += "segment_id,n_vehicles,pollutant_units,clean_air_units,cap\n";
    for (const auto& [segment, units] : trace.pollutant_units) {
        auto clean = trace.clean_air_units.find(segment);
        auto vehicles = trace.vehicles_per_segment.find(segment);
        auto cap = context.caps.find(segment);
        out += segment + ',' +
               std::to_string(vehicles == trace.vehicles_per_segment.end() ? 0 : vehicles->second) +
               ',' + format_double(units) + ',' +
               format_double(clean == trace.clean_air_units.end() ? 0.0 : clean->second) + ',' +
               (cap == context.caps.end() ? std::string() : format_double(cap->second)) + '\n';
    }
    write_text_file(path, out);
}

std::string sweep_summary_json(const SweepResult& result, const RunManifest& manifest) {
    json j;
    j["manifest"] = manifest_json(manifest);
    j["at"] = result.at;
    j["budgets"] = result.budgets_kwh.size();
    j["max_budget_kwh"] = result.budgets_kwh.empty() ? 0.0 : result.budgets_kwh.back();
    j["mean_x"] = json::object();
    for (const auto& [segment, mean] : result.mean_x) j["mean_x"][segment] = mean;
    j["densities"] = json::object();
    for (const auto& [segment, d] : result.densities) j["densities"][segment] = d;
    return j.dump(2) + "\n";
}

void write_sweep_csv(const SweepResult& result, const RunManifest& manifest,
                     const std::filesystem::path& path) {
    std::string out = csv_header_comment(manifest);
    out += "budget_kwh,segment_id,x\n";
    for (std::size_t k = 0; k < result.budgets_kwh.size(); ++k) {
        for (const auto& [segment, values] : result.x_by_segment) {
            out += format_double(result.budgets_kwh[k]) + ',' + segment + ',' +
                   format_double(values[k]) + '\n';
        }
    }
    write_text_file(path, out);
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        raise(Errc::parse_error, "double formatting failed");
    }
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        raise(Errc::parse_error, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace phevsim::io

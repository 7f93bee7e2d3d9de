#pragma once

// Shared test fixtures: the three-route fork/join network used across the
// prediction and optimization tests, the symmetric Y network for the fleet
// scenarios, and a larger seeded commute network for the rolling-horizon
// experiments.

#include <map>
#include <string>
#include <vector>

#include "phevsim/density.hpp"
#include "phevsim/history.hpp"
#include "phevsim/rng.hpp"
#include "phevsim/road_network.hpp"
#include "phevsim/simulate.hpp"

namespace fixtures {

using namespace phevsim;

inline RoadNetwork three_routes_network() {
    std::vector<Segment> segments;
    for (const char* id : {"r1", "r2", "r3", "r4", "r5"}) {
        segments.push_back(Segment{id, 100.0});
    }
    std::vector<Route> routes{
        Route{"R1", {"r1", "r2", "r3"}},
        Route{"R2", {"r1", "r2", "r4"}},
        Route{"R3", {"r1", "r5", "r4"}},
    };
    return RoadNetwork(std::move(segments), std::move(routes));
}

/// Counts 100/200/400 with one fixed energy sample per segment.
inline TripHistory three_routes_history(const RoadNetwork& network) {
    const std::map<RouteId, std::uint64_t> counts{{"R1", 100}, {"R2", 200}, {"R3", 400}};
    const std::map<SegmentId, std::vector<double>> samples{
        {"r1", {0.025}}, {"r2", {0.03}}, {"r3", {0.02}}, {"r4", {0.035}}, {"r5", {0.015}},
    };
    return TripHistory::from_counts(network, counts, samples);
}

inline RoadNetwork y_network() {
    std::vector<Segment> segments{{"r1", 100.0}, {"r2", 100.0}, {"r3", 100.0}};
    std::vector<Route> routes{
        Route{"routeA", {"r1", "r3"}},
        Route{"routeB", {"r2", "r3"}},
    };
    return RoadNetwork(std::move(segments), std::move(routes));
}

inline TripHistory y_history(const RoadNetwork& network) {
    const std::map<RouteId, std::uint64_t> counts{{"routeA", 1}, {"routeB", 1}};
    const std::map<SegmentId, std::vector<double>> samples{
        {"r1", {0.025}}, {"r2", {0.025}}, {"r3", {0.025}}};
    return TripHistory::from_counts(network, counts, samples);
}

inline std::map<SegmentId, double> y_flows() {
    return {{"r1", 20.0}, {"r2", 20.0}, {"r3", 40.0}};
}

inline std::map<SegmentId, double> y_densities() {
    return {{"r1", 50.0}, {"r2", 50.0}, {"r3", 50.0}};
}

/// 20 vehicles entering at r1 plus 20 at r2, identical budgets.
inline std::vector<VehicleConfig> y_fleet(Policy policy, double budget_kwh) {
    std::vector<VehicleConfig> vehicles;
    for (int i = 0; i < 20; ++i) {
        VehicleConfig v;
        v.initial_budget_kwh = budget_kwh;
        v.policy = policy;
        v.route = "routeA";
        vehicles.push_back(v);
    }
    for (int i = 0; i < 20; ++i) {
        VehicleConfig v;
        v.initial_budget_kwh = budget_kwh;
        v.policy = policy;
        v.route = "routeB";
        vehicles.push_back(v);
    }
    return vehicles;
}

// ---- commute fixture ---------------------------------------------------
// Four routes sharing the origin a1 with probabilities 40/30/20/10 and
// seeded uniform energies on [0, 0.05) kWh. Route 1's segments carry the
// highest pedestrian densities, strictly descending along the route, so the
// allocation keeps the current segment fully electric until the budget runs
// out.

inline constexpr std::uint64_t kCommuteSeed = 74123;

inline RoadNetwork commute_network() {
    std::vector<Segment> segments{{"a1", 100.0}};
    std::vector<SegmentId> route1{"a1"};
    for (int i = 1; i <= 11; ++i) {
        const SegmentId id = "b" + std::to_string(i);
        segments.push_back(Segment{id, 100.0});
        route1.push_back(id);
    }
    std::vector<SegmentId> route2{"a1", "b1", "b2"};
    for (int i = 1; i <= 6; ++i) {
        const SegmentId id = "c" + std::to_string(i);
        segments.push_back(Segment{id, 100.0});
        route2.push_back(id);
    }
    std::vector<SegmentId> route3{"a1", "b1"};
    for (int i = 1; i <= 5; ++i) {
        const SegmentId id = "d" + std::to_string(i);
        segments.push_back(Segment{id, 100.0});
        route3.push_back(id);
    }
    std::vector<SegmentId> route4{"a1"};
    for (int i = 1; i <= 4; ++i) {
        const SegmentId id = "e" + std::to_string(i);
        segments.push_back(Segment{id, 100.0});
        route4.push_back(id);
    }
    std::vector<Route> routes{
        Route{"route1", route1},
        Route{"route2", route2},
        Route{"route3", route3},
        Route{"route4", route4},
    };
    return RoadNetwork(std::move(segments), std::move(routes));
}

inline TripHistory commute_history(const RoadNetwork& network,
                                   std::uint64_t seed = kCommuteSeed) {
    return make_synthetic_history(
        network, {{"route1", 40}, {"route2", 30}, {"route3", 20}, {"route4", 10}}, seed);
}

inline std::map<SegmentId, double> commute_densities() {
    std::map<SegmentId, double> d{{"a1", 100.0}};
    for (int i = 1; i <= 11; ++i) d["b" + std::to_string(i)] = 96.0 - 4.0 * (i - 1);
    for (int i = 1; i <= 6; ++i) d["c" + std::to_string(i)] = 40.0 - (i - 1);
    for (int i = 1; i <= 5; ++i) d["d" + std::to_string(i)] = 30.0 - (i - 1);
    for (int i = 1; i <= 4; ++i) d["e" + std::to_string(i)] = 22.0 - (i - 1);
    return d;
}

inline VehicleConfig commute_vehicle(Policy policy, EnergyModel model,
                                     double budget_kwh = 0.22) {
    VehicleConfig v;
    v.initial_budget_kwh = budget_kwh;
    v.policy = policy;
    v.energy_model = model;
    v.route = "route1";
    return v;
}

// ---- random trie fixture -------------------------------------------------
// Routes share prefixes and terminate at distinct leaves, so no route is a
// prefix of another and suffixes never re-merge. The shape class on which
// the count and transition predictors coincide.

struct TrieFixture {
    RoadNetwork network;
    TripHistory history;
};

inline TrieFixture random_prefix_tree(Rng& rng, bool multi_sample_energies = false) {
    std::vector<Segment> segments;
    std::vector<Route> routes;
    std::map<RouteId, std::uint64_t> counts;
    int next_segment = 0;
    auto fresh = [&]() {
        const SegmentId id = "t" + std::to_string(next_segment++);
        segments.push_back(Segment{id, 100.0});
        return id;
    };

    struct Node {
        std::vector<SegmentId> path;
        std::size_t depth;
    };
    std::vector<Node> open{{std::vector<SegmentId>{fresh()}, 0}};
    int route_number = 0;
    while (!open.empty()) {
        Node node = open.back();
        open.pop_back();
        const bool must_close = node.depth >= 3 || routes.size() + open.size() >= 6;
        if (must_close || rng.uniform() < 0.35) {
            const RouteId id = "route" + std::to_string(route_number++);
            routes.push_back(Route{id, node.path});
            counts[id] = 1 + rng.index(40);
            continue;
        }
        const std::size_t children = 2 + rng.index(2);
        for (std::size_t c = 0; c < children; ++c) {
            Node child = node;
            child.path.push_back(fresh());
            child.depth += 1;
            open.push_back(std::move(child));
        }
    }

    RoadNetwork network(std::move(segments), std::move(routes));
    std::map<SegmentId, std::vector<double>> samples;
    for (const Segment& s : network.segments()) {
        if (multi_sample_energies) {
            std::vector<double> values;
            const std::size_t n = 2 + rng.index(8);
            for (std::size_t i = 0; i < n; ++i) values.push_back(rng.uniform(0.0, 0.05));
            samples[s.id] = std::move(values);
        } else {
            samples[s.id] = {0.02};
        }
    }
    TripHistory history = TripHistory::from_counts(network, counts, samples);
    return TrieFixture{std::move(network), std::move(history)};
}

}  // namespace fixtures

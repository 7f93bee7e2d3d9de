#include "phevsim/prediction.hpp"

#include <algorithm>
#include <deque>

namespace phevsim {

namespace {

/// Historical routes that exist in the network and contain `current`.
std::vector<const Route*> matching_routes(const TripHistory& history,
                                          const RoadNetwork& network,
                                          const SegmentId& current) {
    std::vector<const Route*> matches;
    for (const auto& [id, count] : history.route_counts()) {
        (void)count;
        const Route& route = network.route(id);
        if (std::find(route.segments.begin(), route.segments.end(), current) !=
            route.segments.end()) {
            matches.push_back(&route);
        }
    }
    return matches;
}

}  // namespace

std::map<RouteId, double> route_probabilities(const TripHistory& history,
                                              const RoadNetwork& network,
                                              const SegmentId& current) {
    if (!network.has_segment(current)) {
        raise(Errc::unknown_segment, "no segment '" + current + "'");
    }
    const auto matches = matching_routes(history, network, current);
    if (matches.empty()) {
        raise(Errc::no_matching_route, "no historical route passes through '" + current + "'");
    }
    double total = 0.0;
    for (const Route* route : matches) {
        total += static_cast<double>(history.count(route->id));
    }
    std::map<RouteId, double> probs;
    for (const auto& [id, count] : history.route_counts()) {
        (void)count;
        probs[id] = 0.0;
    }
    for (const Route* route : matches) {
        probs[route->id] = static_cast<double>(history.count(route->id)) / total;
    }
    return probs;
}

SegmentPrediction segment_probabilities(const TripHistory& history,
                                        const RoadNetwork& network,
                                        const SegmentId& current) {
    SegmentPrediction prediction;
    prediction.current = current;
    prediction.route_probs = route_probabilities(history, network, current);
    for (const Segment& segment : network.segments()) {
        prediction.segment_probs[segment.id] = 0.0;
    }
    for (const Route* route : matching_routes(history, network, current)) {
        const double p = prediction.route_probs.at(route->id);
        // Only the suffix from the current segment onward counts: budget
        // must never be allocated to segments already behind the vehicle.
        auto it = std::find(route->segments.begin(), route->segments.end(), current);
        for (; it != route->segments.end(); ++it) {
            prediction.segment_probs[*it] += p;
        }
    }
    prediction.segment_probs[current] = 1.0;
    return prediction;
}

bool MarkovModel::has_state(const SegmentId& id) const {
    return std::find(states.begin(), states.end(), id) != states.end();
}

MarkovModel build_markov(const TripHistory& history, const RoadNetwork& network) {
    if (history.empty()) {
        raise(Errc::empty_history, "cannot build a transition model from an empty history");
    }
    MarkovModel model;
    std::map<SegmentId, std::map<SegmentId, double>> weights;
    std::map<SegmentId, double> out_totals;
    std::vector<SegmentId> states;
    for (const auto& [id, count] : history.route_counts()) {
        const Route& route = network.route(id);
        const auto n = static_cast<double>(count);
        for (std::size_t i = 0; i < route.segments.size(); ++i) {
            const SegmentId& from = route.segments[i];
            if (std::find(states.begin(), states.end(), from) == states.end()) {
                states.push_back(from);
            }
            if (i + 1 < route.segments.size()) {
                weights[from][route.segments[i + 1]] += n;
                out_totals[from] += n;
            }
        }
    }
    std::sort(states.begin(), states.end());
    model.states = std::move(states);
    for (const auto& [from, row] : weights) {
        for (const auto& [to, weight] : row) {
            model.transition[from][to] = weight / out_totals.at(from);
        }
    }
    return model;
}

SegmentPrediction markov_segment_probabilities(const MarkovModel& model,
                                               const SegmentId& current) {
    if (!model.has_state(current)) {
        raise(Errc::unknown_state, "'" + current + "' is not a model state");
    }

    // Reachable subgraph from `current`.
    std::vector<SegmentId> reachable{current};
    for (std::size_t i = 0; i < reachable.size(); ++i) {
        auto row = model.transition.find(reachable[i]);
        if (row == model.transition.end()) continue;
        for (const auto& [to, p] : row->second) {
            (void)p;
            if (std::find(reachable.begin(), reachable.end(), to) == reachable.end()) {
                reachable.push_back(to);
            }
        }
    }

    // Kahn topological order; anything left over sits on a cycle.
    std::map<SegmentId, std::size_t> indegree;
    for (const SegmentId& s : reachable) indegree[s] = 0;
    for (const SegmentId& s : reachable) {
        auto row = model.transition.find(s);
        if (row == model.transition.end()) continue;
        for (const auto& [to, p] : row->second) {
            (void)p;
            indegree[to] += 1;
        }
    }
    std::deque<SegmentId> frontier;
    for (const SegmentId& s : reachable) {
        if (indegree[s] == 0) frontier.push_back(s);
    }
    std::vector<SegmentId> order;
    while (!frontier.empty()) {
        SegmentId s = frontier.front();
        frontier.pop_front();
        order.push_back(s);
        auto row = model.transition.find(s);
        if (row == model.transition.end()) continue;
        for (const auto& [to, p] : row->second) {
            (void)p;
            if (--indegree[to] == 0) frontier.push_back(to);
        }
    }
    if (order.size() != reachable.size()) {
        raise(Errc::cyclic_routes,
              "transition structure reachable from '" + current + "' contains a cycle");
    }

    // Forward mass propagation. On a DAG the accumulated mass at a state is
    // exactly the probability of ever reaching it.
    std::map<SegmentId, double> mass;
    for (const SegmentId& s : reachable) mass[s] = 0.0;
    mass[current] = 1.0;
    for (const SegmentId& s : order) {
        auto row = model.transition.find(s);
        if (row == model.transition.end()) continue;
        for (const auto& [to, p] : row->second) {
            mass[to] += mass[s] * p;
        }
    }

    SegmentPrediction prediction;
    prediction.current = current;
    for (const SegmentId& s : model.states) {
        prediction.segment_probs[s] = 0.0;
    }
    for (const auto& [s, p] : mass) {
        prediction.segment_probs[s] = p;
    }
    prediction.segment_probs[current] = 1.0;
    return prediction;
}

SegmentPrediction predict(PredictorKind kind, const TripHistory& history,
                          const RoadNetwork& network, const SegmentId& current) {
    if (kind == PredictorKind::Counts) {
        return segment_probabilities(history, network, current);
    }
    SegmentPrediction prediction = markov_segment_probabilities(build_markov(history, network), current);
    prediction.route_probs = route_probabilities(history, network, current);
    // Key over the full segment universe like the count backend does.
    for (const Segment& segment : network.segments()) {
        prediction.segment_probs.try_emplace(segment.id, 0.0);
    }
    return prediction;
}

}  // namespace phevsim

#pragma once

#include <map>
#include <vector>

#include "phevsim/history.hpp"
#include "phevsim/road_network.hpp"

namespace phevsim {

/// Route and segment probabilities conditioned on the segment the vehicle
/// is currently on. segment_probs covers every network segment; segments on
/// no matching route (including already-traveled ones) carry 0, the current
/// segment carries 1.
struct SegmentPrediction {
    SegmentId current;
    std::map<RouteId, double> route_probs;
    std::map<SegmentId, double> segment_probs;
};

/// p(R_t) = N_t / sum_j N_j over historical routes containing `current`;
/// routes not containing it get probability 0. Throws NoMatchingRoute when
/// no historical route passes through `current`.
std::map<RouteId, double> route_probabilities(const TripHistory& history,
                                              const RoadNetwork& network,
                                              const SegmentId& current);

/// Probability of traversing each segment in the remainder of the journey:
/// the sum of matching-route probabilities over routes whose suffix from
/// `current` onward contains the segment.
SegmentPrediction segment_probabilities(const TripHistory& history,
                                        const RoadNetwork& network,
                                        const SegmentId& current);

/// First-order model of driver intention: per-segment transition
/// probabilities measured from the historical routes, weighted by how often
/// each route was taken.
struct MarkovModel {
    std::vector<SegmentId> states;
    std::map<SegmentId, std::map<SegmentId, double>> transition;

    bool has_state(const SegmentId& id) const;
};

MarkovModel build_markov(const TripHistory& history, const RoadNetwork& network);

/// Probability of ever reaching each state from `current`, computed exactly
/// by forward propagation over the reachable DAG. Rejects cyclic transition
/// structures; route_probs is left empty (the chain stores no route
/// identities).
SegmentPrediction markov_segment_probabilities(const MarkovModel& model,
                                               const SegmentId& current);

enum class PredictorKind { Counts, Markov };

/// Backend dispatch. Route probabilities always come from the count model
/// (the chain cannot name routes); segment probabilities come from the
/// selected backend, keyed over all network segments.
SegmentPrediction predict(PredictorKind kind, const TripHistory& history,
                          const RoadNetwork& network, const SegmentId& current);

}  // namespace phevsim

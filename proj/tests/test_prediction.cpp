#include <doctest.h>

#include <cmath>

#include "phevsim/prediction.hpp"
#include "phevsim/rng.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"

using namespace phevsim;
using checks::code_of;

using fixtures::random_prefix_tree;

TEST_CASE("route probabilities follow the historical counts") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = fixtures::three_routes_history(network);

    const auto at_r1 = route_probabilities(history, network, "r1");
    CHECK(at_r1.at("R1") == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(at_r1.at("R2") == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(at_r1.at("R3") == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

    // Only R1 and R2 pass through r2.
    const auto at_r2 = route_probabilities(history, network, "r2");
    CHECK(at_r2.at("R1") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(at_r2.at("R2") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(at_r2.at("R3") == 0.0);

    // Only one route passes through r5.
    const auto at_r5 = route_probabilities(history, network, "r5");
    CHECK(at_r5.at("R3") == 1.0);
    CHECK(at_r5.at("R1") == 0.0);
}

TEST_CASE("route probabilities error cases") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = TripHistory::from_counts(network, {{"R1", 10}}, {});
    CHECK(code_of([&] { (void)route_probabilities(history, network, "r5"); }) ==
          Errc::no_matching_route);
    CHECK(code_of([&] { (void)route_probabilities(history, network, "zz"); }) ==
          Errc::unknown_segment);
}

TEST_CASE("segment probabilities sum matching route suffixes") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = fixtures::three_routes_history(network);

    const SegmentPrediction at_r1 = segment_probabilities(history, network, "r1");
    CHECK(at_r1.segment_probs.at("r1") == 1.0);
    CHECK(at_r1.segment_probs.at("r2") == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(at_r1.segment_probs.at("r3") == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(at_r1.segment_probs.at("r4") == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
    CHECK(at_r1.segment_probs.at("r5") == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

    // From r2 the suffixes are {r2,r3} and {r2,r4}; r1 is behind, r5 off-route.
    const SegmentPrediction at_r2 = segment_probabilities(history, network, "r2");
    CHECK(at_r2.segment_probs.at("r2") == 1.0);
    CHECK(at_r2.segment_probs.at("r3") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(at_r2.segment_probs.at("r4") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(at_r2.segment_probs.at("r1") == 0.0);
    CHECK(at_r2.segment_probs.at("r5") == 0.0);
}

TEST_CASE("single matching route gives probability one along its suffix") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = TripHistory::from_counts(network, {{"R3", 5}}, {});
    const SegmentPrediction at_r5 = segment_probabilities(history, network, "r5");
    CHECK(at_r5.segment_probs.at("r5") == 1.0);
    CHECK(at_r5.segment_probs.at("r4") == 1.0);
    CHECK(at_r5.segment_probs.at("r1") == 0.0);  // behind the vehicle
}

TEST_CASE("matching route probabilities always sum to one") {
    Rng rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        const auto fixture = random_prefix_tree(rng);
        for (const Segment& segment : fixture.network.segments()) {
            const bool on_some_route =
                !fixture.network.routes_through(segment.id).empty();
            if (!on_some_route) continue;
            const auto probs =
                route_probabilities(fixture.history, fixture.network, segment.id);
            double total = 0.0;
            for (const auto& [route, p] : probs) {
                (void)route;
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("a segment terminating every matching suffix has probability one") {
    // Both routes end at the same segment; from the shared origin its
    // probability must be exactly 1.
    RoadNetwork network({{"s1", 100.0}, {"s2", 100.0}, {"s3", 100.0}, {"s4", 100.0}},
                        {Route{"A", {"s1", "s2", "s4"}}, Route{"B", {"s1", "s3", "s4"}}});
    const TripHistory history = TripHistory::from_counts(network, {{"A", 3}, {"B", 9}}, {});
    const SegmentPrediction at_s1 = segment_probabilities(history, network, "s1");
    CHECK(at_s1.segment_probs.at("s4") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transition model matches the weighted turning counts") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = fixtures::three_routes_history(network);
    const MarkovModel model = build_markov(history, network);

    CHECK(model.transition.at("r1").at("r2") == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(model.transition.at("r1").at("r5") == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(model.transition.at("r2").at("r3") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(model.transition.at("r2").at("r4") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(model.transition.at("r5").at("r4") == doctest::Approx(1.0).epsilon(1e-12));

    // Rows with successors are stochastic.
    for (const auto& [from, row] : model.transition) {
        (void)from;
        double total = 0.0;
        for (const auto& [to, p] : row) {
            (void)to;
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single route yields a unit transition") {
    RoadNetwork network({{"s1", 100.0}, {"s2", 100.0}}, {Route{"A", {"s1", "s2"}}});
    const TripHistory history = TripHistory::from_counts(network, {{"A", 4}}, {});
    const MarkovModel model = build_markov(history, network);
    CHECK(model.transition.at("s1").at("s2") == 1.0);
}

TEST_CASE("empty history cannot build a model") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory empty;
    CHECK(code_of([&] { (void)build_markov(empty, network); }) == Errc::empty_history);
}

TEST_CASE("reachability probabilities match the count model on the fork/join") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = fixtures::three_routes_history(network);
    const MarkovModel model = build_markov(history, network);

    const SegmentPrediction markov = markov_segment_probabilities(model, "r1");
    const SegmentPrediction counts = segment_probabilities(history, network, "r1");
    for (const auto& [segment, p] : counts.segment_probs) {
        CHECK(markov.segment_probs.at(segment) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(markov.segment_probs.at("r4") == doctest::Approx(6.0 / 7.0).epsilon(1e-12));

    // Terminal segment reachable on every path.
    RoadNetwork diamond({{"s1", 100.0}, {"s2", 100.0}, {"s3", 100.0}, {"s4", 100.0}},
                        {Route{"A", {"s1", "s2", "s4"}}, Route{"B", {"s1", "s3", "s4"}}});
    const TripHistory dh = TripHistory::from_counts(diamond, {{"A", 2}, {"B", 6}}, {});
    const SegmentPrediction absorbing =
        markov_segment_probabilities(build_markov(dh, diamond), "s1");
    CHECK(absorbing.segment_probs.at("s4") == doctest::Approx(1.0).epsilon(1e-12));

    // Unreachable segment.
    const SegmentPrediction from_r2 = markov_segment_probabilities(model, "r2");
    CHECK(from_r2.segment_probs.at("r5") == 0.0);
    CHECK(from_r2.segment_probs.at("r1") == 0.0);

    CHECK(code_of([&] { (void)markov_segment_probabilities(model, "zz"); }) ==
          Errc::unknown_state);
}

TEST_CASE("count and transition backends agree on prefix-tree histories") {
    Rng rng(20210101);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto fixture = random_prefix_tree(rng);
        const MarkovModel model = build_markov(fixture.history, fixture.network);
        for (const SegmentId& state : model.states) {
            const SegmentPrediction counts =
                segment_probabilities(fixture.history, fixture.network, state);
            const SegmentPrediction markov = markov_segment_probabilities(model, state);
            for (const auto& [segment, p] : markov.segment_probs) {
                CHECK(counts.segment_probs.at(segment) == doctest::Approx(p).epsilon(1e-12));
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("moving forward renormalizes the previous route distribution") {
    // On tree-shaped histories, re-predicting after moving to a successor
    // equals Bayes-renormalizing the previous distribution over routes
    // containing that successor.
    Rng rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        const auto fixture = random_prefix_tree(rng);
        for (const Route& route : fixture.network.routes()) {
            for (std::size_t i = 0; i + 1 < route.segments.size(); ++i) {
                const SegmentId& here = route.segments[i];
                const SegmentId& next = route.segments[i + 1];
                const auto before = route_probabilities(fixture.history, fixture.network, here);
                const auto after = route_probabilities(fixture.history, fixture.network, next);

                double mass = 0.0;
                for (const Route& candidate : fixture.network.routes()) {
                    const auto& segs = candidate.segments;
                    if (std::find(segs.begin(), segs.end(), next) != segs.end()) {
                        mass += before.at(candidate.id);
                    }
                }
                REQUIRE(mass > 0.0);
                for (const Route& candidate : fixture.network.routes()) {
                    const auto& segs = candidate.segments;
                    const bool contains =
                        std::find(segs.begin(), segs.end(), next) != segs.end();
                    const double expected = contains ? before.at(candidate.id) / mass : 0.0;
                    CHECK(after.at(candidate.id) == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("predict dispatch fills route probabilities for both backends") {
    const RoadNetwork network = fixtures::three_routes_network();
    const TripHistory history = fixtures::three_routes_history(network);
    const SegmentPrediction counts = predict(PredictorKind::Counts, history, network, "r1");
    const SegmentPrediction markov = predict(PredictorKind::Markov, history, network, "r1");
    CHECK(counts.route_probs == markov.route_probs);
    CHECK(markov.segment_probs.size() == network.segments().size());
}

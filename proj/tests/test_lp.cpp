#include <doctest.h>

#include "phevsim/lp.hpp"
#include "phevsim/rng.hpp"
#include "support/lp_oracle.hpp"

using namespace phevsim;

TEST_CASE("simplex solves hand-checked problems") {
    // max x + y, x + y <= 1, x <= 1, y <= 1
    lp::Solution s = lp::maximize({1.0, 1.0}, {{{1.0, 1.0}, lp::Relation::LessEq, 1.0},
                                               {{1.0, 0.0}, lp::Relation::LessEq, 1.0},
                                               {{0.0, 1.0}, lp::Relation::LessEq, 1.0}});
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-12));

    // max 3x + 2y, x + y <= 4, x + 3y <= 6
    s = lp::maximize({3.0, 2.0}, {{{1.0, 1.0}, lp::Relation::LessEq, 4.0},
                                  {{1.0, 3.0}, lp::Relation::LessEq, 6.0}});
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(12.0).epsilon(1e-9));
    CHECK(s.x[0] == doctest::Approx(4.0));
    CHECK(s.x[1] == doctest::Approx(0.0));

    // Degenerate tie: max x1 + x2 with equal rows.
    s = lp::maximize({1.0, 1.0}, {{{1.0, 1.0}, lp::Relation::LessEq, 2.0},
                                  {{1.0, 1.0}, lp::Relation::LessEq, 2.0}});
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(2.0));
}

TEST_CASE("simplex detects infeasible and unbounded problems") {
    // x >= 2 and x <= 1 cannot hold together.
    lp::Solution s = lp::maximize({1.0}, {{{1.0}, lp::Relation::GreaterEq, 2.0},
                                          {{1.0}, lp::Relation::LessEq, 1.0}});
    CHECK(s.status == lp::Status::Infeasible);

    // No rows at all: max x over x >= 0.
    s = lp::maximize({1.0}, {});
    CHECK(s.status == lp::Status::Unbounded);
}

TEST_CASE("simplex handles equality and >= rows") {
    // max x + y with x + y = 1.5, y >= 0.5
    const lp::Solution s =
        lp::maximize({1.0, 1.0}, {{{1.0, 1.0}, lp::Relation::Equal, 1.5},
                                  {{0.0, 1.0}, lp::Relation::GreaterEq, 0.5}});
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(s.x[1] >= 0.5 - 1e-9);
}

TEST_CASE("simplex agrees with the vertex-enumeration oracle") {
    Rng rng(314159);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng.index(5);
        const std::size_t m = 1 + rng.index(4);
        lp_oracle::Lp oracle;
        oracle.n = n;
        std::vector<lp::Constraint> rows;
        for (std::size_t r = 0; r < m; ++r) {
            std::vector<double> coeffs(n);
            for (double& c : coeffs) c = rng.uniform(0.0, 1.0);
            const double rhs = rng.uniform(0.1, 1.5);
            oracle.rows.push_back(coeffs);
            oracle.rhs.push_back(rhs);
            rows.push_back({coeffs, lp::Relation::LessEq, rhs});
        }
        // Box upper bounds become plain rows for the simplex.
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> bound(n, 0.0);
            bound[j] = 1.0;
            rows.push_back({bound, lp::Relation::LessEq, 1.0});
        }
        std::vector<double> objective(n);
        for (double& c : objective) c = rng.uniform(0.0, 5.0);
        oracle.objective = objective;

        const lp::Solution s = lp::maximize(objective, rows);
        const lp_oracle::Result reference = lp_oracle::maximize(oracle);
        REQUIRE(s.status == lp::Status::Optimal);
        REQUIRE(reference.feasible);
        CHECK(s.objective == doctest::Approx(reference.objective).epsilon(1e-7));
    }
}

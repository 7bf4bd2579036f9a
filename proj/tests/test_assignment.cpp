#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "aerotrack/assignment.hpp"
#include "aerotrack/rng.hpp"

using namespace aerotrack;

namespace {

CostMatrix random_matrix(Rng& rng, std::size_t max_dim, double p_infeasible) {
    const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform01() * max_dim);
    const std::size_t c = 1 + static_cast<std::size_t>(rng.uniform01() * max_dim);
    CostMatrix m(std::min(r, max_dim), std::min(c, max_dim));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m.at(i, j) = rng.uniform01() < p_infeasible ? kInfeasible
                                                        : rng.uniform(0.0, 10.0);
        }
    }
    return m;
}

}  // namespace

TEST_CASE("euclidean cost matrix examples") {
    CHECK(euclidean_cost_matrix({{0, 0}}, {{0, 0}}, 1.0).at(0, 0) == 0.0);
    CHECK(euclidean_cost_matrix({{0, 0}}, {{3, 4}}, 0.1).at(0, 0) ==
          doctest::Approx(0.5));

    const CostMatrix m =
        euclidean_cost_matrix({{0, 0}, {10, 0}}, {{0, 1}, {10, 1}}, 0.12);
    CHECK(m.at(0, 0) == doctest::Approx(0.12));
    CHECK(m.at(0, 1) == doctest::Approx(0.12 * std::sqrt(101.0)));
    CHECK(m.at(1, 0) == doctest::Approx(0.12 * std::sqrt(101.0)));
    CHECK(m.at(1, 1) == doctest::Approx(0.12));
}

TEST_CASE("euclidean cost matrix edge cases") {
    CHECK(euclidean_cost_matrix({}, {{1, 2}}, 0.1).rows() == 0);
    CHECK(euclidean_cost_matrix({}, {{1, 2}}, 0.1).cols() == 1);
    CHECK(euclidean_cost_matrix({{1, 2}}, {}, 0.1).cols() == 0);
    CHECK_THROWS_AS(euclidean_cost_matrix({}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("iou cost matrix examples") {
    CHECK(iou_cost_matrix({{0, 0, 2, 2}}, {{0, 0, 2, 2}}).at(0, 0) == 0.0);
    CHECK(iou_cost_matrix({{0, 0, 2, 2}}, {{5, 5, 7, 7}}).at(0, 0) == 1.0);
    CHECK(iou_cost_matrix({{0, 0, 2, 2}}, {{1, 1, 3, 3}}).at(0, 0) ==
          doctest::Approx(6.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("gate keeps the boundary and infeasibilizes above it") {
    const double threshold = 17.0 * 0.12;  // 2.04
    CostMatrix m(1, 3);
    m.at(0, 0) = 0.5;
    m.at(0, 1) = 2.1;
    m.at(0, 2) = 2.04;
    const CostMatrix g = gate(m, threshold);
    CHECK(g.at(0, 0) == 0.5);
    CHECK(!g.feasible(0, 1));
    CHECK(g.at(0, 2) == 2.04);  // boundary kept, strict inequality
}

TEST_CASE("gate is idempotent") {
    Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        const CostMatrix m = random_matrix(rng, 6, 0.1);
        const double t = rng.uniform(0.0, 10.0);
        const CostMatrix once = gate(m, t);
        const CostMatrix twice = gate(once, t);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                CHECK(once.at(i, j) == twice.at(i, j));
            }
        }
    }
}

TEST_CASE("solve_assignment examples") {
    SUBCASE("3x3, brute-force-verified optimum") {
        const CostMatrix m =
            CostMatrix::from_rows({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}});
        const Assignment a = solve_assignment(m);
        CHECK(a.total_cost == 5.0);
        REQUIRE(a.pairs.size() == 3);
        CHECK(a.pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
        CHECK(a.pairs[1] == std::pair<std::size_t, std::size_t>{1, 0});
        CHECK(a.pairs[2] == std::pair<std::size_t, std::size_t>{2, 2});
        const Assignment b = solve_assignment_bruteforce(m);
        CHECK(b.total_cost == 5.0);
        CHECK(b.pairs == a.pairs);
    }
    SUBCASE("fully infeasible") {
        CostMatrix m(1, 1, kInfeasible);
        const Assignment a = solve_assignment(m);
        CHECK(a.pairs.empty());
        CHECK(a.unmatched_rows == std::vector<std::size_t>{0});
        CHECK(a.unmatched_cols == std::vector<std::size_t>{0});
    }
    SUBCASE("single-row argmin") {
        const Assignment a = solve_assignment(CostMatrix::from_rows({{1, 2}}));
        REQUIRE(a.pairs.size() == 1);
        CHECK(a.pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
        CHECK(a.unmatched_cols == std::vector<std::size_t>{1});
        CHECK(a.total_cost == 1.0);
    }
    SUBCASE("empty matrix") {
        const Assignment a = solve_assignment(CostMatrix(0, 0));
        CHECK(a.pairs.empty());
        CHECK(a.total_cost == 0.0);
    }
}

TEST_CASE("brute force examples") {
    const Assignment a = solve_assignment_bruteforce(CostMatrix::from_rows({{0}}));
    REQUIRE(a.pairs.size() == 1);
    CHECK(a.total_cost == 0.0);

    CostMatrix forced(2, 2, kInfeasible);
    forced.at(0, 0) = 1.0;
    forced.at(1, 1) = 1.0;
    const Assignment b = solve_assignment_bruteforce(forced);
    REQUIRE(b.pairs.size() == 2);
    CHECK(b.total_cost == 2.0);

    CHECK_THROWS_AS(solve_assignment_bruteforce(CostMatrix(9, 2)),
                    std::invalid_argument);
}

TEST_CASE("oracle equivalence on random gated matrices") {
    Rng rng(2024);
    for (int k = 0; k < 1000; ++k) {
        const CostMatrix m = random_matrix(rng, 7, 0.2);
        const Assignment fast = solve_assignment(m);
        const Assignment slow = solve_assignment_bruteforce(m);
        REQUIRE(fast.total_cost == slow.total_cost);
        REQUIRE(fast.pairs.size() == slow.pairs.size());
    }
}

TEST_CASE("row permutation permutes the output pairs") {
    Rng rng(99);
    for (int k = 0; k < 100; ++k) {
        const CostMatrix m = random_matrix(rng, 6, 0.15);
        std::vector<std::size_t> perm(m.rows());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        for (std::size_t i = perm.size(); i > 1; --i) {
            std::swap(perm[i - 1],
                      perm[static_cast<std::size_t>(rng.uniform01() * i)]);
        }
        CostMatrix p(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                p.at(perm[i], j) = m.at(i, j);
            }
        }
        const Assignment am = solve_assignment(m);
        const Assignment ap = solve_assignment(p);
        CHECK(am.total_cost == doctest::Approx(ap.total_cost).epsilon(1e-12));
        // continuous costs: the optimum is unique a.s., so pair sets map 1:1
        std::vector<std::pair<std::size_t, std::size_t>> mapped;
        for (const auto& [r, c] : am.pairs) mapped.emplace_back(perm[r], c);
        std::sort(mapped.begin(), mapped.end());
        CHECK(mapped == ap.pairs);
    }
}

TEST_CASE("adding a constant to a square all-feasible matrix") {
    Rng rng(123);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 5);
        CostMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rng.uniform(0.0, 10.0);
        }
        const double c = rng.uniform(0.0, 5.0);
        CostMatrix shifted = m;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) shifted.at(i, j) += c;
        }
        const Assignment am = solve_assignment(m);
        const Assignment as = solve_assignment(shifted);
        CHECK(am.pairs == as.pairs);
        CHECK(as.total_cost ==
              doctest::Approx(am.total_cost + c * double(n)).epsilon(1e-9));
        CHECK(am.pairs.size() == n);  // all-feasible square: always n pairs
    }
}

TEST_CASE("cost matrix validation") {
    CostMatrix m(1, 1, -1.0);
    CHECK_THROWS_AS(solve_assignment(m), std::invalid_argument);
    CHECK_THROWS_AS(gate(CostMatrix(1, 1, 1.0), -0.5), std::invalid_argument);
}

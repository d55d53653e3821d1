#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pcgcn/dataset.hpp"
#include "pcgcn/instance.hpp"

using namespace pcgcn;

namespace {
Instance make(std::vector<std::array<int, 2>> coords, std::uint32_t p) {
    return Instance(0, p, std::move(coords));
}
}  // namespace

TEST_CASE("generate_instance draws n points in the integer square") {
    const Instance inst = generate_instance(50, 5, 7);
    CHECK(inst.n() == 50);
    CHECK(inst.p() == 5);
    CHECK(inst.id() == 7);
    for (const auto& c : inst.coords()) {
        CHECK(c[0] >= 0);
        CHECK(c[0] <= 100);
        CHECK(c[1] >= 0);
        CHECK(c[1] <= 100);
    }
}

TEST_CASE("generate_instance is deterministic per seed") {
    const Instance a = generate_instance(50, 5, 1234);
    const Instance b = generate_instance(50, 5, 1234);
    CHECK(a.coords() == b.coords());
    CHECK(instance_to_jsonl(a) == instance_to_jsonl(b));
    const Instance c = generate_instance(50, 5, 1235);
    CHECK(a.coords() != c.coords());
}

TEST_CASE("generate_instance rejects bad p") {
    CHECK_THROWS_AS(generate_instance(5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance(5, 6, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance(0, 1, 1), std::invalid_argument);
    CHECK_NOTHROW(generate_instance(1, 1, 1));
}

TEST_CASE("distance matrix invariants") {
    const Instance inst = generate_instance(20, 3, 99);
    for (std::uint32_t i = 0; i < inst.n(); ++i) {
        CHECK(inst.dist(i, i) == 0.0);
        for (std::uint32_t j = 0; j < inst.n(); ++j) {
            CHECK(inst.dist(i, j) == inst.dist(j, i));
            const double dx = inst.coords()[i][0] - inst.coords()[j][0];
            const double dy = inst.coords()[i][1] - inst.coords()[j][1];
            CHECK(inst.dist(i, j) == std::sqrt(dx * dx + dy * dy));
        }
    }
}

TEST_CASE("instance constructor validates coordinates") {
    CHECK_THROWS_AS(make({{-1, 0}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make({{0, 101}}, 1), std::invalid_argument);
    CHECK_NOTHROW(make({{0, 100}}, 1));
}

TEST_CASE("build_knn breaks ties by smaller index") {
    // collinear points at x = 0, 1, 2
    const Instance inst = make({{0, 0}, {1, 0}, {2, 0}}, 1);
    const KnnGraph g = build_knn(inst, 1);
    CHECK(g.nbrs[0] == std::vector<std::uint32_t>{1});
    CHECK(g.nbrs[1] == std::vector<std::uint32_t>{0});  // tie between 0 and 2
    CHECK(g.nbrs[2] == std::vector<std::uint32_t>{1});
}

TEST_CASE("build_knn caps k at n-1") {
    const Instance inst = generate_instance(6, 2, 5);
    const KnnGraph g = build_knn(inst, 50);
    for (std::uint32_t i = 0; i < inst.n(); ++i) {
        CHECK(g.nbrs[i].size() == 5);
        for (std::uint32_t j : g.nbrs[i]) CHECK(j != i);
    }
    CHECK_THROWS_AS(build_knn(inst, 0), std::invalid_argument);
}

TEST_CASE("build_knn matches the brute-force row sort") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Instance inst = generate_instance(8, 2, seed);
        for (std::uint32_t k : {1u, 3u, 7u, 9u}) {
            const KnnGraph g = build_knn(inst, k);
            for (std::uint32_t i = 0; i < inst.n(); ++i)
                CHECK(g.nbrs[i] == oracle::knn_row(inst, i, k));
        }
    }
}

TEST_CASE("build_knn is reproducible") {
    const Instance inst = generate_instance(30, 4, 17);
    const KnnGraph a = build_knn(inst, 10);
    const KnnGraph b = build_knn(inst, 10);
    CHECK(a.nbrs == b.nbrs);
}

TEST_CASE("single-vertex instance has an empty neighborhood") {
    const Instance inst = generate_instance(1, 1, 3);
    const KnnGraph g = build_knn(inst, 10);
    CHECK(g.nbrs.size() == 1);
    CHECK(g.nbrs[0].empty());
    CHECK(objective(inst, Solution{{0}}) == 0.0);
}

TEST_CASE("objective basics") {
    const Instance inst = make({{0, 0}, {10, 0}, {20, 0}}, 1);
    CHECK(objective(inst, Solution{{0}}) == 20.0);
    CHECK(objective(inst, Solution{{0, 1, 2}}) == 0.0);
    CHECK_THROWS_AS(objective(inst, Solution{}), std::invalid_argument);
    CHECK_THROWS_AS(objective(inst, Solution{{3}}), std::invalid_argument);
}

TEST_CASE("objective matches the nested-loop oracle") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance inst = generate_instance(10, 3, seed);
        const std::vector<std::uint32_t> open = {static_cast<std::uint32_t>(seed % 10),
                                                 static_cast<std::uint32_t>((seed * 3 + 1) % 10),
                                                 static_cast<std::uint32_t>((seed * 7 + 2) % 10)};
        CHECK(objective(inst, Solution{open}) == oracle::objective_of(inst, open));
    }
}

TEST_CASE("objective is monotone under adding vertices") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Instance inst = generate_instance(12, 2, seed);
        Solution sol{{0}};
        double prev = objective(inst, sol);
        for (std::uint32_t v = 1; v < inst.n(); v += 2) {
            sol.open.push_back(v);
            const double cur = objective(inst, sol);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("singleton objective equals the distance row maximum") {
    const Instance inst = generate_instance(15, 3, 8);
    for (std::uint32_t j = 0; j < inst.n(); ++j) {
        double row_max = 0.0;
        for (std::uint32_t i = 0; i < inst.n(); ++i) row_max = std::max(row_max, inst.dist(i, j));
        CHECK(objective(inst, Solution{{j}}) == row_max);
    }
}

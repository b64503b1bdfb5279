#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conclust/core.hpp"
#include "helpers.hpp"

using namespace conclust;
using testing::path_instance;

TEST_CASE("evaluate_objective on co-located points is zero for every tag") {
    std::vector<std::vector<double>> m(3, std::vector<double>(3, 0.0));
    Instance inst(3, {{0, 1}, {1, 2}}, m, 1);
    ClusteringSolution sol{{{0, 1, 2}}, {0}, Objective::Center, 0};
    for (auto tag : {Objective::Center, Objective::Median, Objective::Means,
                     Objective::Msr, Objective::Msd})
        CHECK(evaluate_objective(inst, sol, tag) == doctest::Approx(0.0));
}

TEST_CASE("evaluate_objective on the 4-path") {
    Instance inst = path_instance(4, 2);
    ClusteringSolution sol{{{0, 1}, {2, 3}}, {0, 2}, Objective::Center, 0};
    CHECK(evaluate_objective(inst, sol, Objective::Center) == doctest::Approx(1.0));
    CHECK(evaluate_objective(inst, sol, Objective::Msd) == doctest::Approx(2.0));
    CHECK(evaluate_objective(inst, sol, Objective::Msr) == doctest::Approx(2.0));
    CHECK(evaluate_objective(inst, sol, Objective::Median) == doctest::Approx(2.0));
    CHECK(evaluate_objective(inst, sol, Objective::Means) == doctest::Approx(2.0));
}

TEST_CASE("evaluate_objective error cases") {
    Instance inst = path_instance(3, 1);
    ClusteringSolution no_centers{{{0, 1, 2}}, {}, Objective::Center, 0};
    CHECK_THROWS(evaluate_objective(inst, no_centers, Objective::Center));
    CHECK_NOTHROW(evaluate_objective(inst, no_centers, Objective::Msd));
    ClusteringSolution misaligned{{{0, 1}, {2}}, {0}, Objective::Center, 0};
    CHECK_THROWS(evaluate_objective(inst, misaligned, Objective::Median));
}

TEST_CASE("validate_solution") {
    Instance inst = path_instance(4, 2);
    SUBCASE("singleton clusters are feasible") {
        ClusteringSolution sol{{{0}, {1}, {2}, {3}}, {0, 1, 2, 3}, Objective::Center, 0};
        CHECK(validate_solution(inst, sol).ok());
    }
    SUBCASE("disconnected cluster reported") {
        ClusteringSolution sol{{{0, 2}, {1, 3}}, {0, 1}, Objective::Center, 0};
        auto rep = validate_solution(inst, sol);
        REQUIRE(!rep.ok());
        CHECK(rep.problems[0].find("disconnected") != std::string::npos);
    }
    SUBCASE("overlap reported") {
        ClusteringSolution sol{{{0, 1}, {1, 2, 3}}, {0, 2}, Objective::Center, 0};
        auto rep = validate_solution(inst, sol);
        REQUIRE(!rep.ok());
        CHECK(rep.problems[0].find("not a partition") != std::string::npos);
    }
    SUBCASE("uncovered vertex reported") {
        ClusteringSolution sol{{{0, 1}, {2}}, {0, 2}, Objective::Center, 0};
        CHECK(!validate_solution(inst, sol).ok());
    }
    SUBCASE("center outside cluster") {
        ClusteringSolution sol{{{0, 1}, {2, 3}}, {2, 3}, Objective::Center, 0};
        CHECK(!validate_solution(inst, sol).ok());
        CHECK(validate_solution(inst, sol, false).ok());
    }
}

TEST_CASE("metric_from_coords") {
    CHECK(metric_from_coords({{0}, {3}}, Norm::L1)[0][1] == doctest::Approx(3.0));
    CHECK(metric_from_coords({{0, 0}, {3, 4}}, Norm::L2)[0][1] == doctest::Approx(5.0));
    CHECK(metric_from_coords({{0, 0}, {3, 4}}, Norm::Linf)[0][1] == doctest::Approx(4.0));
    auto single = metric_from_coords({{7, 7}}, Norm::L2);
    REQUIRE(single.size() == 1);
    CHECK(single[0][0] == doctest::Approx(0.0));
    CHECK_THROWS(metric_from_coords({{0, 0}, {1}}, Norm::L2));
}

TEST_CASE("Instance construction validation") {
    std::vector<std::vector<double>> m(2, std::vector<double>(2, 0.0));
    m[0][1] = m[1][0] = 1.0;
    CHECK_THROWS(Instance(2, {{0, 0}}, m, 1));       // self-loop
    CHECK_THROWS(Instance(2, {{0, 1}, {1, 0}}, m, 1));  // duplicate
    CHECK_THROWS(Instance(2, {{0, 2}}, m, 1));       // out of range
    CHECK_THROWS(Instance(2, {{0, 1}}, m, 3));       // k > n
    auto bad = m;
    bad[0][1] = 2.0;
    CHECK_THROWS(Instance(2, {{0, 1}}, bad, 1));     // asymmetric
    std::vector<std::vector<double>> tri(3, std::vector<double>(3, 0.0));
    tri[0][1] = tri[1][0] = 1.0;
    tri[1][2] = tri[2][1] = 1.0;
    tri[0][2] = tri[2][0] = 5.0;
    CHECK_THROWS(Instance(3, {}, tri, 1));
    CHECK_NOTHROW(Instance(3, {}, tri, 1, false));   // triangle check is opt-out
}

TEST_CASE("component bookkeeping") {
    std::vector<std::vector<double>> m(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) m[i][j] = 1.0;
    Instance inst(4, {{0, 1}, {2, 3}}, m, 2);
    CHECK(inst.component_count() == 2);
    auto lab = inst.component_labels();
    CHECK(lab[0] == lab[1]);
    CHECK(lab[2] == lab[3]);
    CHECK(lab[0] != lab[2]);
    CHECK(inst.complete_graph_variant().component_count() == 1);
    CHECK(inst.with_k(3).k() == 3);
}

TEST_CASE("msr <= msd <= 2*msr with best in-cluster centers") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        Instance inst = testing::random_instance(8, 2, rng);
        // random connected 2-split: grow one cluster by BFS prefix
        std::vector<int> order{0};
        std::vector<char> vis(8, 0);
        vis[0] = 1;
        for (size_t i = 0; i < order.size(); ++i)
            for (int w : inst.adj()[order[i]])
                if (!vis[w]) {
                    vis[w] = 1;
                    order.push_back(w);
                }
        std::uniform_int_distribution<int> cut(1, 7);
        int c = cut(rng);
        ClusteringSolution sol;
        sol.clusters.assign(2, {});
        std::vector<char> first(8, 0);
        for (int i = 0; i < c; ++i) first[order[i]] = 1;
        for (int v = 0; v < 8; ++v) sol.clusters[first[v] ? 0 : 1].push_back(v);
        if (!validate_solution(inst, sol, false).ok()) continue;
        for (auto& cl : sol.clusters)
            sol.centers.push_back(best_center_radius(inst, cl).first);
        double msr = evaluate_objective(inst, sol, Objective::Msr);
        double msd = evaluate_objective(inst, sol, Objective::Msd);
        double center = evaluate_objective(inst, sol, Objective::Center);
        CHECK(msr <= msd + 1e-9);
        CHECK(msd <= 2 * msr + 1e-9);
        CHECK(center >= msr / inst.k() - 1e-9);
    }
}

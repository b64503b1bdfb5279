#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conclust/instances.hpp"
#include "conclust/io.hpp"
#include "helpers.hpp"

using namespace conclust;
using nlohmann::json;

TEST_CASE("instance round trip, matrix form") {
    Instance p4 = testing::path_instance(4, 2);
    auto j = instance_to_json(p4);
    Instance back = instance_from_json(j);
    CHECK(back.n() == 4);
    CHECK(back.k() == 2);
    CHECK(back.edges() == p4.edges());
    CHECK(back.metric() == p4.metric());
}

TEST_CASE("instance from coords") {
    json j = {{"n", 3},
              {"k", 1},
              {"edges", {{0, 1}, {1, 2}}},
              {"metric", {{"coords", {{0.0}, {3.0}, {4.0}}}, {"norm", "l1"}}}};
    Instance inst = instance_from_json(j);
    CHECK(inst.d(0, 2) == doctest::Approx(4.0));
    j["metric"]["norm"] = "manhattan";
    CHECK_THROWS(instance_from_json(j));
}

TEST_CASE("solution and decomposition round trips") {
    ClusteringSolution sol;
    sol.clusters = {{0, 1}, {2}};
    sol.centers = {0, 2};
    sol.objective = Objective::Msr;
    sol.value = 1.5;
    auto back = solution_from_json(solution_to_json(sol));
    CHECK(back.clusters == sol.clusters);
    CHECK(back.centers == sol.centers);
    CHECK(back.objective == Objective::Msr);
    CHECK(back.value == 1.5);

    TreeDecomposition td;
    td.bags = {{0, 1}, {1, 2}};
    td.tree_edges = {{0, 1}};
    auto td2 = decomposition_from_json(decomposition_to_json(td));
    CHECK(td2.bags == td.bags);
    CHECK(td2.tree_edges == td.tree_edges);
}

TEST_CASE("bundle round trip with optional parts") {
    auto kt = gen_partial_ktree(8, 2, 2, 5);
    Bundle b{std::move(kt.inst), std::move(kt.decomposition), std::vector<int>{0, 3},
             "ktree", 5};
    auto back = bundle_from_json(bundle_to_json(b));
    CHECK(back.inst.n() == 8);
    REQUIRE(back.decomposition.has_value());
    CHECK(back.decomposition->bags == b.decomposition->bags);
    REQUIRE(back.centers.has_value());
    CHECK(*back.centers == std::vector<int>{0, 3});
    CHECK(back.generator == "ktree");
    CHECK(back.seed == 5);

    Bundle bare{testing::path_instance(3, 1), {}, {}, "", 0};
    auto j = bundle_to_json(bare);
    CHECK(!j.contains("decomposition"));
    CHECK(!j.contains("centers"));
    CHECK(!bundle_from_json(j).centers.has_value());
}

TEST_CASE("msr report serialization") {
    MsrReport rep;
    rep.guess = {{2, 1.5}};
    rep.lambda = 0.25;
    rep.components.resize(2);
    rep.components[0].rad = 1.0;
    auto j = msr_report_to_json(rep);
    CHECK(j["component_count"] == 2);
    CHECK(j["lambda"] == 0.25);
    CHECK(j["guess"][0]["v"] == 2);
    CHECK(j["greedy_extra"] == false);
}

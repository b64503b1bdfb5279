#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "conclust/center_dp.hpp"
#include "conclust/instances.hpp"
#include "conclust/oracle.hpp"
#include "helpers.hpp"

using namespace conclust;

TEST_CASE("layered_distance") {
    CHECK(layered_distance({1, 2}, {1, 2}) == 0.0);
    CHECK(layered_distance({1}, {0}) == 1.0);
    CHECK(layered_distance({1, 2}, {2, 1}) == 4.0);
    CHECK(layered_distance({0, 0}, {1, 2}) == 2.0);
    CHECK_THROWS(layered_distance({1}, {1, 2}));

    std::mt19937 rng(131);
    std::uniform_int_distribution<int> entry(0, 3);
    for (int rep = 0; rep < 500; ++rep) {
        LayeredPosition a, b, c;
        for (int i = 0; i < 3; ++i) {
            a.push_back(entry(rng));
            b.push_back(entry(rng));
            c.push_back(entry(rng));
        }
        CHECK(layered_distance(a, c) <=
              layered_distance(a, b) + layered_distance(b, c));
        CHECK(layered_distance(a, b) == layered_distance(b, a));
    }
}

TEST_CASE("parse_cnf and satisfiability") {
    Cnf f = parse_cnf("x1 | x2 | -x3 & -x2");
    CHECK(f.vars == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::vector<int>{1, 2, -3});
    CHECK(f.clauses[1] == std::vector<int>{-2});
    CHECK(cnf_satisfiable(f));
    CHECK(!cnf_satisfiable(parse_cnf("x1 & -x1")));
    CHECK_THROWS(parse_cnf(""));
    CHECK_THROWS(parse_cnf("x1 | x2 | x3 | x4"));
}

TEST_CASE("compute_S") {
    auto s4 = compute_S(4);
    CHECK(s4 == std::vector<unsigned long long>{2, 3, 13, 20593});
    for (size_t i = 0; i + 1 < s4.size(); ++i) CHECK(s4[i] < s4[i + 1]);
    CHECK_THROWS_AS(compute_S(5), std::overflow_error);
}

TEST_CASE("gen_hardness single-variable formula") {
    auto h = gen_hardness({1, parse_cnf("x1"), 100});
    CHECK(h.inst.n() == 6);  // T, F, x, xbar, a, b
    CHECK(h.centers.size() == 2);
    CHECK(h.inst.k() == 2);
    CHECK(hardness_vertex_count(1, 1, 1) == 6);
    // distances live in {0,1,2}
    for (int u = 0; u < 6; ++u)
        for (int v = 0; v < 6; ++v)
            CHECK((h.inst.d(u, v) == 0 || h.inst.d(u, v) == 1 || h.inst.d(u, v) == 2));
}

TEST_CASE("gen_hardness figure-sized formula structure") {
    Cnf f = parse_cnf("x1 | x2 | x3 & -x2 | -x3");
    auto h = gen_hardness({1, f, 100});
    REQUIRE(h.inst.n() == 13);  // 2 + 2*3 + 3 + 2
    CHECK(hardness_vertex_count(1, 3, 2) == 13);

    // classify by position: centers at (1) and (2), literals at bottom
    int t = h.centers[0], fv = h.centers[1];
    CHECK(h.positions[t] == LayeredPosition{1});
    CHECK(h.positions[fv] == LayeredPosition{2});
    std::multiset<size_t> clause_degrees;
    int n_lit = 0, n_a = 0, n_b = 0;
    for (int v = 0; v < 13; ++v) {
        if (v == t || v == fv) continue;
        if (h.positions[v] == LayeredPosition{0}) {
            ++n_lit;
            CHECK(h.inst.has_edge(v, t));
            CHECK(h.inst.has_edge(v, fv));
        } else if (h.positions[v] == LayeredPosition{2}) {
            ++n_a;  // variable gadget: joined to x_i and its negation
            CHECK(h.inst.adj()[v].size() == 2);
        } else {
            ++n_b;  // clause gadget
            clause_degrees.insert(h.inst.adj()[v].size());
        }
    }
    CHECK(n_lit == 6);
    CHECK(n_a == 3);
    CHECK(n_b == 2);
    CHECK(clause_degrees == std::multiset<size_t>{2, 3});
}

TEST_CASE("hardness gap at one layer") {
    for (const char* text : {"x1", "x1 | x2 & -x1", "x1 | -x2 & x2 | x3 & -x3"}) {
        auto h = gen_hardness({1, parse_cnf(text), 1000});
        auto sol = oracle_solve_assignment(h.inst, h.centers, Objective::Center);
        CHECK(sol.value == doctest::Approx(1.0));
    }
    for (const char* text : {"x1 & -x1", "x1 | x2 & -x1 & -x2",
                             "x1 | x2 & x1 | -x2 & -x1 | x2 & -x1 | -x2"}) {
        Cnf f = parse_cnf(text);
        REQUIRE(!cnf_satisfiable(f));
        auto h = gen_hardness({1, f, 1000});
        auto sol = oracle_solve_assignment(h.inst, h.centers, Objective::Center);
        CHECK(sol.value >= 2.0 - 1e-9);
    }
}

TEST_CASE("two-layer instance is buildable for a tiny formula") {
    Cnf f = parse_cnf("x1");
    unsigned long long est = hardness_vertex_count(2, 1, 1);
    auto h = gen_hardness({2, f, est});
    CHECK((unsigned long long)h.inst.n() == est);
    CHECK((int)h.centers.size() == 6);  // S_1 * S_2
    for (auto& p : h.positions) CHECK(p.size() == 2);
    CHECK(h.inst.component_count() == 1);
    CHECK_THROWS_WITH_AS(gen_hardness({2, f, est - 1}),
                         doctest::Contains(std::to_string(est).c_str()),
                         std::runtime_error);
}

TEST_CASE("reduction size and shape") {
    Instance p5 = testing::path_instance(5, 2);
    auto red = assignment_to_free_reduction(p5, {0, 3});
    CHECK(red.reduced.n() == 11);  // (2+1)*3 + 2
    CHECK(red.reduced.k() == 2);
    CHECK(red.copies == 3);
    // copies of vertex 1 all neighbor the single copy of center 0
    for (int j = 0; j < 3; ++j) CHECK(red.reduced.has_edge(j * 3 + 0, 9));

    // connectivity through a single center is preserved
    Instance star = testing::complete_instance({{0, 0}, {1, 0}, {0, 1}}, 1);
    Instance star_graph(3, {{0, 1}, {0, 2}}, star.metric(), 1);
    auto red1 = assignment_to_free_reduction(star_graph, {0});
    CHECK(red1.reduced.component_count() == 1);
}

TEST_CASE("reduction round trip stays within twice the optimum") {
    std::mt19937 rng(137);
    for (int rep = 0; rep < 6; ++rep) {
        Instance inst = testing::random_instance(5, 2, rng);
        std::vector<int> centers{0, 1 + rep % 4};
        auto red = assignment_to_free_reduction(inst, centers);
        auto nice = nice_decomposition_for(red.reduced);
        auto free_sol = solve_center_exact(red.reduced, nice);
        auto back = map_back_assignment(inst, red, free_sol);

        CHECK(validate_solution(inst, back).ok());
        for (size_t i = 0; i < centers.size(); ++i) CHECK(back.centers[i] == centers[i]);
        auto opt = oracle_solve_assignment(inst, centers, Objective::Center);
        CHECK(back.value >= opt.value - 1e-9);
        CHECK(back.value <= 2 * opt.value + 1e-9);
    }
}

TEST_CASE("random generators") {
    Instance tree = gen_random_tree(12, 3, 7);
    CHECK(tree.edges().size() == 11);
    CHECK(tree.component_count() == 1);
    Instance tree2 = gen_random_tree(12, 3, 7);
    CHECK(tree.edges() == tree2.edges());
    CHECK(tree.metric() == tree2.metric());
    CHECK(gen_random_tree(12, 3, 8).metric() != tree.metric());

    Instance geo = gen_random_geometric(15, 2, 0.3, 11);
    CHECK(geo.component_count() == 1);
    Instance geo2 = gen_random_geometric(15, 2, 0.3, 11);
    CHECK(geo.edges() == geo2.edges());

    for (uint64_t seed = 0; seed < 6; ++seed) {
        auto kt = gen_partial_ktree(10, 2, 2, seed);
        CHECK(kt.inst.component_count() == 1);
        auto rep = validate_decomposition(kt.inst, kt.decomposition);
        CHECK(rep.ok());
        CHECK(kt.decomposition.width() <= 2);
    }
    auto kt3 = gen_partial_ktree(9, 2, 3, 5);
    CHECK(kt3.decomposition.width() <= 3);
    CHECK(validate_decomposition(kt3.inst, kt3.decomposition).ok());
}

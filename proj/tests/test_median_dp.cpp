#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "conclust/median_dp.hpp"
#include "conclust/oracle.hpp"
#include "helpers.hpp"

using namespace conclust;
using testing::path_instance;

namespace {

double unit_cost(const Instance& inst, int v, int f, MedianMode mode) {
    double d = inst.d(v, f);
    return mode == MedianMode::Median ? d : d * d;
}

std::vector<std::vector<std::pair<int, int>>> subtree_edges(const NiceDecomposition& nd) {
    std::vector<std::vector<std::pair<int, int>>> out(nd.nodes.size());
    for (size_t i = 0; i < nd.nodes.size(); ++i) {
        for (int c : nd.nodes[i].children)
            out[i].insert(out[i].end(), out[c].begin(), out[c].end());
        if (nd.nodes[i].type == NodeType::IntroduceEdge)
            out[i].push_back({nd.nodes[i].a, nd.nodes[i].b});
    }
    return out;
}

// Brute-force p_t(k',a,U) per the budgeted cost definition. -1 = infinity.
double brute_pt(const Instance& inst, const NiceDecomposition& nice, int t,
                const std::vector<std::pair<int, int>>& et,
                const std::vector<int>& facilities, MedianMode mode, int budget,
                const std::vector<int>& assign, const Rgs& part) {
    auto vt = nice.subtree_vertices[t].to_vector();
    int m = (int)vt.size();
    if (m == 0) return budget == 0 ? 0.0 : -1.0;
    std::map<int, int> remap;
    for (int i = 0; i < m; ++i) remap[vt[i]] = i;
    std::vector<std::pair<int, int>> sub_edges;
    for (auto [u, v] : et) sub_edges.push_back({remap[u], remap[v]});
    std::vector<std::vector<double>> sub_d(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub_d[i][j] = inst.d(vt[i], vt[j]);
    Instance sub(m, sub_edges, sub_d, m, false);

    const auto& bag = nice.nodes[t].bag;
    std::map<std::set<int>, int> block_target;
    for (int lab = 0; lab < block_count(part); ++lab) {
        std::set<int> blk;
        int target = -1;
        for (size_t q = 0; q < bag.size(); ++q)
            if (part[q] == lab) {
                blk.insert(bag[q]);
                target = assign[q];
            }
        block_target[blk] = target;
    }

    double best = -1;
    enumerate_connected_partitions(
        sub, m,
        [&](const std::vector<std::vector<int>>& blocks) {
            int finished = 0;
            double cost = 0;
            std::set<std::set<int>> seen;
            for (auto& b : blocks) {
                std::set<int> orig, inter;
                for (int v : b) orig.insert(vt[v]);
                for (int v : orig)
                    if (std::find(bag.begin(), bag.end(), v) != bag.end()) inter.insert(v);
                if (inter.empty()) {
                    ++finished;
                    double fc = -1;
                    for (int f : facilities) {
                        double c = 0;
                        for (int v : orig) c += unit_cost(inst, v, f, mode);
                        if (fc < 0 || c < fc) fc = c;
                    }
                    cost += fc;
                } else {
                    auto it = block_target.find(inter);
                    if (it == block_target.end() || seen.count(inter)) return true;
                    seen.insert(inter);
                    for (int v : orig)
                        if (!inter.count(v)) cost += unit_cost(inst, v, it->second, mode);
                }
            }
            if (finished != budget || seen.size() != block_target.size()) return true;
            if (best < 0 || cost < best) best = cost;
            return true;
        },
        OracleConfig{});
    return best;
}

}  // namespace

TEST_CASE("introduce-vertex fans out over all facilities unconditionally") {
    Instance p3 = path_instance(3, 2);
    auto nice = nice_decomposition_for(p3);
    std::vector<int> fac{0, 1, 2};
    auto tabs = run_median_dp(p3, nice, fac, MedianMode::Median);
    // first introduce-vertex node sits directly above the leaf
    for (size_t t = 0; t < nice.nodes.size(); ++t)
        if (nice.nodes[t].type == NodeType::IntroduceVertex &&
            nice.nodes[nice.nodes[t].children[0]].type == NodeType::Leaf) {
            CHECK(tabs.per_node[t].size() == 3);
            for (auto& e : tabs.per_node[t]) {
                CHECK(e.cost == doctest::Approx(0.0));
                CHECK(e.budget == 0);
            }
            break;
        }
}

TEST_CASE("solve_median_facilities examples") {
    Instance p4 = path_instance(4, 2);
    auto nice = nice_decomposition_for(p4);
    auto sol = solve_median_facilities(p4, nice, {1, 2}, MedianMode::Median);
    CHECK(sol.value == doctest::Approx(2.0));
    CHECK(validate_solution(p4, sol, false).ok());
    CHECK((int)sol.clusters.size() == 2);

    Instance p4k1 = path_instance(4, 1);
    auto nice1 = nice_decomposition_for(p4k1);
    auto sol1 = solve_median_facilities(p4k1, nice1, {0}, MedianMode::Median);
    CHECK(sol1.value == doctest::Approx(6.0));

    Instance all = path_instance(4, 4);
    auto sola = solve_median_facilities(all, nice_decomposition_for(all),
                                        {0, 1, 2, 3}, MedianMode::Median);
    CHECK(sola.value == doctest::Approx(0.0));
}

TEST_CASE("means mode squares distances") {
    Instance p4k1 = path_instance(4, 1);
    auto nice = nice_decomposition_for(p4k1);
    auto sol = solve_median_facilities(p4k1, nice, {0}, MedianMode::Means);
    CHECK(sol.value == doctest::Approx(1.0 + 4.0 + 9.0));
}

TEST_CASE("CostTable correctness vs brute-force p_t") {
    std::mt19937 rng(211);
    for (int rep = 0; rep < 4; ++rep) {
        Instance inst = testing::random_instance(6, 2 + rep % 2, rng, 0.25);
        auto nice = nice_decomposition_for(inst);
        auto et = subtree_edges(nice);
        std::vector<int> fac{0, 3, 5};
        for (auto mode : {MedianMode::Median, MedianMode::Means}) {
            auto tabs = run_median_dp(inst, nice, fac, mode);
            for (size_t t = 0; t < nice.nodes.size(); ++t)
                for (const auto& e : tabs.per_node[t]) {
                    double pt = brute_pt(inst, nice, (int)t, et[t], fac, mode,
                                         e.budget, e.assign, e.part);
                    REQUIRE(pt >= 0);
                    CHECK(e.cost == doctest::Approx(pt).epsilon(1e-9));
                    if (std::abs(e.cost - pt) > 1e-6) return;
                }
        }
    }
}

TEST_CASE("root cost non-increasing in k") {
    std::mt19937 rng(223);
    Instance base = testing::random_instance(8, 1, rng);
    std::vector<int> fac{0, 2, 4, 6};
    double prev = -1;
    for (int k = 1; k <= 4; ++k) {
        Instance inst = base.with_k(k);
        auto nice = nice_decomposition_for(inst);
        auto tabs = run_median_dp(inst, nice, fac, MedianMode::Median);
        REQUIRE(tabs.root_cost >= 0);
        if (prev >= 0) CHECK(tabs.root_cost <= prev + 1e-9);
        prev = tabs.root_cost;
    }
}

TEST_CASE("facility DP optimum matches facility oracle") {
    std::mt19937 rng(227);
    for (int rep = 0; rep < 8; ++rep) {
        Instance inst = testing::random_instance(7, 2, rng);
        auto nice = nice_decomposition_for(inst);
        std::vector<int> fac{1, 4, 6};
        for (auto [mode, tag] :
             {std::pair{MedianMode::Median, Objective::Median},
              std::pair{MedianMode::Means, Objective::Means}}) {
            auto sol = solve_median_facilities(inst, nice, fac, mode);
            auto opt = oracle_solve(inst, tag, fac);
            CHECK(sol.value == doctest::Approx(opt.value).epsilon(1e-9));
        }
    }
}

TEST_CASE("select_facilities_median") {
    Instance all = path_instance(4, 4);
    auto [fa, a1] = select_facilities_median(all, MedianMode::Median);
    CHECK(fa == std::vector<int>{0, 1, 2, 3});
    CHECK(facility_cost(all, fa, MedianMode::Median) == doctest::Approx(0.0));

    std::vector<std::vector<double>> pts{{0, 0}, {0, 0}, {9, 0}, {9, 0}};
    Instance pairs = testing::complete_instance(pts, 2);
    auto [fp, a2] = select_facilities_median(pairs, MedianMode::Median);
    CHECK(facility_cost(pairs, fp, MedianMode::Median) == doctest::Approx(0.0));

    Instance p4 = path_instance(4, 2);
    auto [f4, a3] = select_facilities_median(p4, MedianMode::Median);
    CHECK(facility_cost(p4, f4, MedianMode::Median) <= 2.0 + 1e-9);
    CHECK(a3 == doctest::Approx(5.0));
    CHECK(select_facilities_median(p4, MedianMode::Means).second == doctest::Approx(25.0));
}

TEST_CASE("nesting bound: facility optimum <= cost(F) + 2*OPT") {
    std::mt19937 rng(229);
    for (int rep = 0; rep < 8; ++rep) {
        Instance inst = testing::random_instance(7, 2, rng);
        auto nice = nice_decomposition_for(inst);
        auto [fac, alpha] = select_facilities_median(inst, MedianMode::Median);
        auto dp = solve_median_facilities(inst, nice, fac, MedianMode::Median);
        auto opt = oracle_solve(inst, Objective::Median);
        CHECK(dp.value <=
              facility_cost(inst, fac, MedianMode::Median) + 2 * opt.value + 1e-9);
    }
}

TEST_CASE("fpt wrappers: feasible and within the theorem bounds") {
    std::mt19937 rng(233);
    for (int rep = 0; rep < 10; ++rep) {
        Instance inst = testing::random_instance(8, 1 + rep % 4, rng);
        auto nice = nice_decomposition_for(inst);

        auto med = solve_median_fpt(inst, nice);
        CHECK(validate_solution(inst, med).ok());
        CHECK((int)med.clusters.size() == inst.k());
        auto mopt = oracle_solve(inst, Objective::Median);
        CHECK(med.value >= mopt.value - 1e-9);
        CHECK(med.value <= (2 * 5 + 4) * mopt.value + 1e-9);

        auto mea = solve_means_fpt(inst, nice);
        CHECK(validate_solution(inst, mea).ok());
        auto sopt = oracle_solve(inst, Objective::Means);
        CHECK(mea.value >= sopt.value - 1e-9);
        CHECK(mea.value <= (8 * 25 + 32) * sopt.value + 1e-9);
    }
    Instance all = path_instance(4, 4);
    auto nice = nice_decomposition_for(all);
    CHECK(solve_median_fpt(all, nice).value == doctest::Approx(0.0));
    CHECK(solve_means_fpt(all, nice).value == doctest::Approx(0.0));
}

TEST_CASE("infeasible when components exceed k") {
    std::vector<std::vector<double>> m(4, std::vector<double>(4, 1.0));
    for (int i = 0; i < 4; ++i) m[i][i] = 0.0;
    Instance inst(4, {{0, 1}, {2, 3}}, m, 1);
    auto nice = nice_decomposition_for(inst);
    CHECK_THROWS(solve_median_facilities(inst, nice, {0}, MedianMode::Median));
}

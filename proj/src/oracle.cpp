#include "conclust/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace conclust {

namespace {

struct Enumerator {
    const Instance& inst;
    int k;
    const std::function<bool(const std::vector<std::vector<int>>&)>& cb;
    long long budget;
    std::vector<char> assigned;
    std::vector<std::vector<int>> blocks;
    bool stopped = false;

    int min_unassigned() const {
        for (int v = 0; v < inst.n(); ++v)
            if (!assigned[v]) return v;
        return -1;
    }

    void emit() {
        if (--budget < 0) throw std::runtime_error("partition enumeration limit exceeded");
        if (!cb(blocks)) stopped = true;
    }

    // All connected supersets of the current last block within unassigned
    // vertices; each frontier vertex is either taken or banned for good.
    void grow(std::vector<char>& banned) {
        if (stopped) return;
        finish_block();
        if (stopped) return;
        auto& block = blocks.back();
        std::vector<int> frontier;
        for (int u : block)
            for (int w : inst.adj()[u])
                if (!assigned[w] && !banned[w] &&
                    std::find(frontier.begin(), frontier.end(), w) == frontier.end())
                    frontier.push_back(w);
        for (int w : frontier) {
            if (stopped) return;
            if (assigned[w] || banned[w]) continue;
            block.push_back(w);
            assigned[w] = 1;
            grow(banned);
            assigned[w] = 0;
            block.pop_back();
            banned[w] = 1;
        }
        for (int w : frontier) banned[w] = 0;
    }

    // Current last block is complete; start the next one (or emit).
    void finish_block() {
        int v = min_unassigned();
        if (v == -1) {
            emit();
            return;
        }
        if ((int)blocks.size() >= k) return;
        blocks.push_back({v});
        assigned[v] = 1;
        std::vector<char> banned(inst.n(), 0);
        grow(banned);
        assigned[v] = 0;
        blocks.pop_back();
    }
};

}  // namespace

void enumerate_connected_partitions(
    const Instance& inst, int k,
    const std::function<bool(const std::vector<std::vector<int>>&)>& cb,
    const OracleConfig& config) {
    if (inst.n() > config.max_n)
        throw std::invalid_argument("instance too large for brute force");
    Enumerator e{inst, k, cb, config.max_partitions, std::vector<char>(inst.n(), 0), {}};
    e.finish_block();
}

std::vector<std::vector<std::vector<int>>> connected_partitions(
    const Instance& inst, int k, const OracleConfig& config) {
    std::vector<std::vector<std::vector<int>>> out;
    enumerate_connected_partitions(
        inst, k,
        [&](const std::vector<std::vector<int>>& p) {
            out.push_back(p);
            return true;
        },
        config);
    return out;
}

namespace {

// Best center and cost for one cluster; candidates are either the cluster
// itself or a facility set.
std::pair<int, double> best_cluster_center(const Instance& inst,
                                           const std::vector<int>& cluster,
                                           const std::vector<int>& candidates,
                                           Objective tag) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int c : candidates) {
        double cost = 0;
        for (int v : cluster) {
            double x = inst.d(v, c);
            switch (tag) {
                case Objective::Center:
                case Objective::Msr: cost = std::max(cost, x); break;
                case Objective::Median: cost += x; break;
                case Objective::Means: cost += x * x; break;
                case Objective::Msd: break;
            }
        }
        if (cost < best_cost) {
            best = c;
            best_cost = cost;
        }
    }
    return {best, best_cost};
}

ClusteringSolution score_partition(const Instance& inst,
                                   const std::vector<std::vector<int>>& blocks,
                                   Objective tag,
                                   const std::optional<std::vector<int>>& facilities) {
    ClusteringSolution sol;
    sol.clusters = blocks;
    sol.objective = tag;
    sol.value = 0;
    for (auto& cl : blocks) {
        if (tag == Objective::Msd) {
            sol.value += cluster_diameter(inst, cl);
            continue;
        }
        auto [c, cost] = best_cluster_center(inst, cl, facilities ? *facilities : cl, tag);
        sol.centers.push_back(c);
        if (tag == Objective::Center)
            sol.value = std::max(sol.value, cost);
        else
            sol.value += cost;
    }
    return sol;
}

}  // namespace

ClusteringSolution oracle_solve(const Instance& inst, Objective tag,
                                const std::optional<std::vector<int>>& facilities,
                                const OracleConfig& config) {
    if (inst.component_count() > inst.k())
        throw std::runtime_error("infeasible: more components than clusters");
    ClusteringSolution best;
    bool found = false;
    enumerate_connected_partitions(
        inst, inst.k(),
        [&](const std::vector<std::vector<int>>& blocks) {
            auto sol = score_partition(inst, blocks, tag, facilities);
            if (!found || sol.value < best.value) {
                best = std::move(sol);
                found = true;
            }
            return true;
        },
        config);
    return best;
}

ClusteringSolution oracle_solve_assignment(const Instance& inst,
                                           const std::vector<int>& centers,
                                           Objective tag) {
    int n = inst.n(), k = (int)centers.size();
    std::vector<char> is_center(n, 0);
    for (int c : centers) is_center[c] = 1;
    std::vector<int> free;
    for (int v = 0; v < n; ++v)
        if (!is_center[v]) free.push_back(v);
    if (std::pow((double)k, (double)free.size()) > 5e7)
        throw std::invalid_argument("assignment enumeration too large");

    ClusteringSolution best;
    bool found = false;
    std::vector<int> who(free.size(), 0);
    while (true) {
        std::vector<std::vector<int>> blocks(k);
        for (int i = 0; i < k; ++i) blocks[i].push_back(centers[i]);
        for (size_t i = 0; i < free.size(); ++i) blocks[who[i]].push_back(free[i]);
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        ClusteringSolution cand;
        cand.clusters = blocks;
        cand.centers = centers;
        cand.objective = tag;
        if (validate_solution(inst, cand).ok()) {
            cand.value = evaluate_objective(inst, cand, tag);
            if (!found || cand.value < best.value) {
                best = std::move(cand);
                found = true;
            }
        }
        size_t i = 0;
        while (i < who.size() && who[i] == k - 1) who[i++] = 0;
        if (i == who.size()) break;
        ++who[i];
    }
    if (!found) throw std::runtime_error("infeasible: no connected assignment");
    return best;
}

}  // namespace conclust

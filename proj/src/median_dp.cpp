#include "conclust/median_dp.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "dp_key.hpp"

namespace conclust {

using detail::bag_position;
using detail::DpKey;
using detail::DpKeyHash;
using detail::insert_at;
using detail::remove_at;

namespace {

double unit_cost(const Instance& inst, int v, int f, MedianMode mode) {
    double d = inst.d(v, f);
    return mode == MedianMode::Median ? d : d * d;
}

using Table = std::unordered_map<DpKey, int, DpKeyHash>;

struct NodePass {
    const Instance& inst;
    const NiceDecomposition& nice;
    const std::vector<int>& facilities;
    MedianMode mode;
    int k;
    MedianDpTables& out;

    void relax(Table& table, int node, DpKey key, double cost, int c1, int c2) {
        auto it = table.find(key);
        if (it == table.end()) {
            int idx = (int)out.per_node[node].size();
            out.per_node[node].push_back({key.budget, key.assign, key.part, cost, c1, c2});
            table.emplace(std::move(key), idx);
        } else if (cost < out.per_node[node][it->second].cost) {
            auto& e = out.per_node[node][it->second];
            e.cost = cost;
            e.c1 = c1;
            e.c2 = c2;
        }
    }

    Table leaf(int t) {
        Table table;
        relax(table, t, DpKey{{}, {}, 0}, 0.0, -1, -1);
        return table;
    }

    Table introduce_vertex(int t, const Table& child) {
        const auto& nd = nice.nodes[t];
        int s = nd.children[0], v = nd.a;
        int pv = bag_position(nd.bag, v);
        Table table;
        for (auto& [ckey, cidx] : child) {
            double cost = out.per_node[s][cidx].cost;
            Rgs part = rgs_insert_singleton(ckey.part, pv);
            for (int f : facilities)
                relax(table, t,
                      DpKey{insert_at(ckey.assign, pv, f), part, ckey.budget},
                      cost, cidx, -1);
        }
        return table;
    }

    Table introduce_edge(int t, const Table& child) {
        const auto& nd = nice.nodes[t];
        int s = nd.children[0];
        int pu = bag_position(nd.bag, nd.a), pv = bag_position(nd.bag, nd.b);
        Table table;
        for (auto& [ckey, cidx] : child) {
            double cost = out.per_node[s][cidx].cost;
            relax(table, t, ckey, cost, cidx, -1);
            if (ckey.assign[pu] == ckey.assign[pv] && ckey.part[pu] != ckey.part[pv])
                relax(table, t,
                      DpKey{ckey.assign, rgs_merge_blocks(ckey.part, pu, pv), ckey.budget},
                      cost, cidx, -1);
        }
        return table;
    }

    Table join(int t, const Table& left, const Table& right) {
        const auto& nd = nice.nodes[t];
        int s1 = nd.children[0], s2 = nd.children[1];
        std::unordered_map<DpKey, std::vector<int>, DpKeyHash> by_assign;
        for (auto& [rkey, ridx] : right)
            by_assign[DpKey{rkey.assign, {}, 0}].push_back(ridx);
        Table table;
        for (auto& [lkey, lidx] : left) {
            auto it = by_assign.find(DpKey{lkey.assign, {}, 0});
            if (it == by_assign.end()) continue;
            double lcost = out.per_node[s1][lidx].cost;
            for (int ridx : it->second) {
                const auto& re = out.per_node[s2][ridx];
                if (lkey.budget + re.budget > k) continue;
                relax(table, t,
                      DpKey{lkey.assign, join_partitions(lkey.part, re.part),
                            lkey.budget + re.budget},
                      lcost + re.cost, lidx, ridx);
            }
        }
        return table;
    }

    Table forget(int t, const Table& child) {
        const auto& nd = nice.nodes[t];
        int s = nd.children[0], v = nd.a;
        int pv = bag_position(nice.nodes[s].bag, v);
        Table table;
        for (auto& [ckey, cidx] : child) {
            double cost = out.per_node[s][cidx].cost + unit_cost(inst, v, ckey.assign[pv], mode);
            bool singleton = true;
            for (size_t q = 0; q < ckey.part.size(); ++q)
                if ((int)q != pv && ckey.part[q] == ckey.part[pv]) singleton = false;
            DpKey shrunk{remove_at(ckey.assign, pv), rgs_remove(ckey.part, pv), ckey.budget};
            if (singleton) {
                if (ckey.budget + 1 > k) continue;
                shrunk.budget = ckey.budget + 1;
            }
            relax(table, t, shrunk, cost, cidx, -1);
        }
        return table;
    }
};

struct OpenCluster {
    std::set<int> verts;
    int target;
};

}  // namespace

MedianDpTables run_median_dp(const Instance& inst, const NiceDecomposition& nice,
                             const std::vector<int>& facilities, MedianMode mode) {
    if (facilities.empty()) throw std::invalid_argument("facility set is empty");
    MedianDpTables out;
    out.per_node.assign(nice.nodes.size(), {});
    NodePass pass{inst, nice, facilities, mode, inst.k(), out};
    std::vector<Table> live(nice.nodes.size());
    for (size_t t = 0; t < nice.nodes.size(); ++t) {
        const auto& nd = nice.nodes[t];
        switch (nd.type) {
            case NodeType::Leaf: live[t] = pass.leaf((int)t); break;
            case NodeType::IntroduceVertex:
                live[t] = pass.introduce_vertex((int)t, live[nd.children[0]]);
                break;
            case NodeType::IntroduceEdge:
                live[t] = pass.introduce_edge((int)t, live[nd.children[0]]);
                break;
            case NodeType::Join:
                live[t] = pass.join((int)t, live[nd.children[0]], live[nd.children[1]]);
                break;
            case NodeType::Forget:
                live[t] = pass.forget((int)t, live[nd.children[0]]);
                break;
        }
        for (int c : nd.children) Table().swap(live[c]);
    }
    for (const auto& e : out.per_node[nice.root])
        if (e.budget == inst.k()) out.root_cost = e.cost;
    return out;
}

ClusteringSolution solve_median_facilities(const Instance& inst,
                                           const NiceDecomposition& nice,
                                           const std::vector<int>& facilities,
                                           MedianMode mode) {
    auto tables = run_median_dp(inst, nice, facilities, mode);
    if (tables.root_cost < 0)
        throw std::runtime_error("infeasible: more components than clusters");
    int root_entry = -1;
    for (size_t i = 0; i < tables.per_node[nice.root].size(); ++i)
        if (tables.per_node[nice.root][i].budget == inst.k()) root_entry = (int)i;

    std::vector<std::shared_ptr<OpenCluster>> closed;
    struct Frame {
        int node, entry;
        std::vector<std::shared_ptr<OpenCluster>> pos2c;
    };
    std::vector<Frame> stack{{nice.root, root_entry, {}}};
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        const auto& nd = nice.nodes[fr.node];
        const auto& e = tables.per_node[fr.node][fr.entry];
        switch (nd.type) {
            case NodeType::Leaf: break;
            case NodeType::IntroduceVertex: {
                int pv = bag_position(nd.bag, nd.a);
                fr.pos2c[pv]->verts.insert(nd.a);
                stack.push_back({nd.children[0], e.c1, remove_at(fr.pos2c, pv)});
                break;
            }
            case NodeType::IntroduceEdge:
                stack.push_back({nd.children[0], e.c1, fr.pos2c});
                break;
            case NodeType::Join:
                stack.push_back({nd.children[0], e.c1, fr.pos2c});
                stack.push_back({nd.children[1], e.c2, fr.pos2c});
                break;
            case NodeType::Forget: {
                int s = nd.children[0];
                const auto& ce = tables.per_node[s][e.c1];
                int pv = bag_position(nice.nodes[s].bag, nd.a);
                auto child_pos = insert_at(fr.pos2c, pv, std::shared_ptr<OpenCluster>());
                int sibling = -1;
                for (size_t q = 0; q < ce.part.size(); ++q)
                    if ((int)q != pv && ce.part[q] == ce.part[pv]) sibling = (int)q;
                if (sibling == -1) {
                    auto nc = std::make_shared<OpenCluster>();
                    nc->target = ce.assign[pv];
                    closed.push_back(nc);
                    child_pos[pv] = nc;
                } else {
                    child_pos[pv] = child_pos[sibling];
                }
                stack.push_back({s, e.c1, std::move(child_pos)});
                break;
            }
        }
    }
    ClusteringSolution sol;
    for (auto& c : closed) {
        sol.clusters.emplace_back(c->verts.begin(), c->verts.end());
        sol.centers.push_back(c->target);
    }
    sol.objective = mode == MedianMode::Median ? Objective::Median : Objective::Means;
    sol.value = tables.root_cost;
    return sol;
}

double facility_cost(const Instance& inst, const std::vector<int>& fac, MedianMode mode) {
    double total = 0;
    for (int v = 0; v < inst.n(); ++v) {
        double best = std::numeric_limits<double>::infinity();
        for (int f : fac) best = std::min(best, unit_cost(inst, v, f, mode));
        total += best;
    }
    return total;
}

std::pair<std::vector<int>, double> select_facilities_median(const Instance& inst,
                                                             MedianMode mode) {
    constexpr double kDelta = 1e-4;
    int k = inst.k();
    // farthest-first start, then single swaps while they help noticeably
    std::vector<int> fac{0};
    std::vector<double> dist(inst.n());
    for (int v = 0; v < inst.n(); ++v) dist[v] = inst.d(v, 0);
    while ((int)fac.size() < k) {
        int far = -1;
        for (int v = 0; v < inst.n(); ++v) {
            if (std::find(fac.begin(), fac.end(), v) != fac.end()) continue;
            if (far == -1 || dist[v] > dist[far]) far = v;
        }
        fac.push_back(far);
        for (int v = 0; v < inst.n(); ++v) dist[v] = std::min(dist[v], inst.d(v, far));
    }
    double cur = facility_cost(inst, fac, mode);
    bool improved = true;
    while (improved && cur > 0) {
        improved = false;
        for (size_t i = 0; i < fac.size() && !improved; ++i) {
            int old = fac[i];
            for (int v = 0; v < inst.n() && !improved; ++v) {
                if (std::find(fac.begin(), fac.end(), v) != fac.end()) continue;
                fac[i] = v;
                double cand = facility_cost(inst, fac, mode);
                if (cand < (1 - kDelta) * cur) {
                    cur = cand;
                    improved = true;
                } else {
                    fac[i] = old;
                }
            }
        }
    }
    std::sort(fac.begin(), fac.end());
    return {fac, mode == MedianMode::Median ? 5.0 : 25.0};
}

namespace {

ClusteringSolution fpt_pipeline(const Instance& inst, const NiceDecomposition& nice,
                                MedianMode mode) {
    auto [fac, alpha] = select_facilities_median(inst, mode);
    (void)alpha;
    auto sol = solve_median_facilities(inst, nice, fac, mode);
    for (size_t i = 0; i < sol.clusters.size(); ++i) {
        int f = sol.centers[i], best = sol.clusters[i][0];
        for (int v : sol.clusters[i])
            if (inst.d(v, f) < inst.d(best, f)) best = v;
        sol.centers[i] = best;
    }
    sol.value = evaluate_objective(inst, sol, sol.objective);
    return sol;
}

}  // namespace

ClusteringSolution solve_median_fpt(const Instance& inst, const NiceDecomposition& nice) {
    return fpt_pipeline(inst, nice, MedianMode::Median);
}

ClusteringSolution solve_means_fpt(const Instance& inst, const NiceDecomposition& nice) {
    return fpt_pipeline(inst, nice, MedianMode::Means);
}

}  // namespace conclust

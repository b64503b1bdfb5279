#include "conclust/center_dp.hpp"

#include <algorithm>
#include <deque>
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

std::vector<double> candidate_radii(const Instance& inst, CenterMode mode,
                                    const std::vector<int>& facilities) {
    std::vector<double> out{0.0};
    if (mode == CenterMode::Exact) {
        for (int u = 0; u < inst.n(); ++u)
            for (int v = u + 1; v < inst.n(); ++v) out.push_back(inst.d(u, v));
    } else {
        for (int v = 0; v < inst.n(); ++v)
            for (int f : facilities) out.push_back(inst.d(v, f));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

using Table = std::unordered_map<DpKey, int, DpKeyHash>;

struct NodePass {
    const Instance& inst;
    const NiceDecomposition& nice;
    double r;
    CenterMode mode;
    const std::vector<int>& facilities;
    CenterDpTables& out;

    void relax(Table& table, int node, DpKey key, long long value, int c1, int c2) {
        auto it = table.find(key);
        if (it == table.end()) {
            int idx = (int)out.per_node[node].size();
            out.per_node[node].push_back({key.assign, key.part, value, c1, c2});
            table.emplace(std::move(key), idx);
        } else if (value < out.per_node[node][it->second].value) {
            auto& e = out.per_node[node][it->second];
            e.value = value;
            e.c1 = c1;
            e.c2 = c2;
        }
    }

    Table leaf(int t) {
        Table table;
        relax(table, t, DpKey{{}, {}, 0}, 0, -1, -1);
        return table;
    }

    Table introduce_vertex(int t, const Table& child) {
        const auto& nd = nice.nodes[t];
        int s = nd.children[0], v = nd.a;
        int pv = bag_position(nd.bag, v);
        const auto& vt = nice.subtree_vertices[t];
        // reachable targets outside the subtree are the same for every entry
        std::vector<int> ball_out;
        if (mode == CenterMode::Exact)
            for (int u = 0; u < inst.n(); ++u)
                if (!vt.test(u) && inst.d(v, u) <= r) ball_out.push_back(u);
        Table table;
        for (auto& [ckey, cidx] : child) {
            long long val = out.per_node[s][cidx].value;
            Rgs part = rgs_insert_singleton(ckey.part, pv);
            auto emit = [&](int target) {
                relax(table, t, DpKey{insert_at(ckey.assign, pv, target), part, 0},
                      val, cidx, -1);
            };
            if (mode == CenterMode::Facility) {
                for (int f : facilities)
                    if (inst.d(v, f) <= r) emit(f);
                continue;
            }
            bool assigned_to_v = false;
            for (int a : ckey.assign)
                if (a == v) assigned_to_v = true;
            if (assigned_to_v) {
                emit(v);
                continue;
            }
            for (int u : ball_out) emit(u);
            emit(v);  // d(v,v) = 0 <= r
            for (size_t q = 0; q < ckey.assign.size(); ++q) {
                int a = ckey.assign[q];
                if (!vt.test(a) || inst.d(v, a) > r) continue;
                bool dup = false;
                for (size_t p = 0; p < q; ++p)
                    if (ckey.assign[p] == a) dup = true;
                if (!dup) emit(a);
            }
        }
        return table;
    }

    Table introduce_edge(int t, const Table& child) {
        const auto& nd = nice.nodes[t];
        int s = nd.children[0];
        int pu = bag_position(nd.bag, nd.a), pv = bag_position(nd.bag, nd.b);
        Table table;
        for (auto& [ckey, cidx] : child) {
            long long val = out.per_node[s][cidx].value;
            relax(table, t, ckey, val, cidx, -1);
            if (ckey.assign[pu] == ckey.assign[pv] && ckey.part[pu] != ckey.part[pv])
                relax(table, t, DpKey{ckey.assign, rgs_merge_blocks(ckey.part, pu, pv), 0},
                      val, cidx, -1);
        }
        return table;
    }

    Table join(int t, const Table& left, const Table& right) {
        const auto& nd = nice.nodes[t];
        int s1 = nd.children[0], s2 = nd.children[1];
        // group the right table by assignment for the intersection
        std::unordered_map<DpKey, std::vector<int>, DpKeyHash> by_assign;
        for (auto& [rkey, ridx] : right)
            by_assign[DpKey{rkey.assign, {}, 0}].push_back(ridx);
        Table table;
        for (auto& [lkey, lidx] : left) {
            auto it = by_assign.find(DpKey{lkey.assign, {}, 0});
            if (it == by_assign.end()) continue;
            long long lval = out.per_node[s1][lidx].value;
            for (int ridx : it->second) {
                const auto& re = out.per_node[s2][ridx];
                relax(table, t,
                      DpKey{lkey.assign, join_partitions(lkey.part, re.part), 0},
                      lval + re.value, lidx, ridx);
            }
        }
        return table;
    }

    Table forget(int t, const Table& child) {
        const auto& nd = nice.nodes[t];
        int s = nd.children[0], v = nd.a;
        int pv = bag_position(nice.nodes[s].bag, v);
        const auto& vt = nice.subtree_vertices[t];
        Table table;
        for (auto& [ckey, cidx] : child) {
            long long val = out.per_node[s][cidx].value;
            bool singleton = true;
            for (size_t q = 0; q < ckey.part.size(); ++q)
                if ((int)q != pv && ckey.part[q] == ckey.part[pv]) singleton = false;
            auto shrunk = DpKey{remove_at(ckey.assign, pv), rgs_remove(ckey.part, pv), 0};
            if (singleton) {
                int target = ckey.assign[pv];
                bool closes = true;
                if (mode == CenterMode::Exact) {
                    if (!vt.test(target)) closes = false;
                    for (size_t q = 0; q < ckey.assign.size(); ++q)
                        if ((int)q != pv && ckey.assign[q] == target) closes = false;
                }
                if (closes) relax(table, t, shrunk, val + 1, cidx, -1);
            } else {
                relax(table, t, shrunk, val, cidx, -1);
            }
        }
        return table;
    }
};

}  // namespace

CenterDpTables run_center_dp(const Instance& inst, const NiceDecomposition& nice,
                             double r, CenterMode mode,
                             const std::vector<int>& facilities) {
    if (mode == CenterMode::Facility && facilities.empty())
        throw std::invalid_argument("facility mode needs a facility set");
    CenterDpTables out;
    out.per_node.assign(nice.nodes.size(), {});
    NodePass pass{inst, nice, r, mode, facilities, out};
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
    if (!out.per_node[nice.root].empty())
        out.root_value = out.per_node[nice.root][0].value;
    return out;
}

long long feasible_cluster_count(const Instance& inst, const NiceDecomposition& nice,
                                 double r, CenterMode mode,
                                 const std::vector<int>& facilities) {
    return run_center_dp(inst, nice, r, mode, facilities).root_value;
}

namespace {

struct OpenCluster {
    std::set<int> verts;
    int target;
};

}  // namespace

ClusteringSolution extract_center_solution(const Instance& inst,
                                           const NiceDecomposition& nice,
                                           const CenterDpTables& tables) {
    if (tables.root_value == kNoSolution)
        throw std::runtime_error("no solution to extract");
    std::vector<std::shared_ptr<OpenCluster>> closed;
    struct Frame {
        int node, entry;
        std::vector<std::shared_ptr<OpenCluster>> pos2c;
    };
    std::vector<Frame> stack{{nice.root, 0, {}}};
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
    return sol;
}

void split_to_k(const Instance& inst, ClusteringSolution& sol, int k) {
    bool has_centers = !sol.centers.empty();
    while ((int)sol.clusters.size() < k) {
        // peel a BFS-tree leaf off the largest splittable cluster
        int best = -1;
        for (size_t i = 0; i < sol.clusters.size(); ++i)
            if (sol.clusters[i].size() >= 2 &&
                (best == -1 || sol.clusters[i].size() > sol.clusters[best].size()))
                best = (int)i;
        if (best == -1) throw std::runtime_error("cannot split into k clusters");
        auto& cl = sol.clusters[best];
        int root = cl[0];
        if (has_centers &&
            std::find(cl.begin(), cl.end(), sol.centers[best]) != cl.end())
            root = sol.centers[best];
        std::vector<char> in(inst.n(), 0), vis(inst.n(), 0), has_child(inst.n(), 0);
        for (int v : cl) in[v] = 1;
        std::vector<int> order{root};
        vis[root] = 1;
        for (size_t i = 0; i < order.size(); ++i)
            for (int w : inst.adj()[order[i]])
                if (in[w] && !vis[w]) {
                    vis[w] = 1;
                    has_child[order[i]] = 1;
                    order.push_back(w);
                }
        int leaf = -1;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (*it != root && !has_child[*it]) {
                leaf = *it;
                break;
            }
        cl.erase(std::find(cl.begin(), cl.end(), leaf));
        sol.clusters.push_back({leaf});
        if (has_centers) sol.centers.push_back(leaf);
    }
}

ClusteringSolution solve_center_exact(const Instance& inst, const NiceDecomposition& nice) {
    auto radii = candidate_radii(inst, CenterMode::Exact);
    auto feasible = [&](double r) {
        auto c = feasible_cluster_count(inst, nice, r, CenterMode::Exact);
        return c != kNoSolution && c <= inst.k();
    };
    if (!feasible(radii.back()))
        throw std::runtime_error("infeasible: more components than clusters");
    size_t lo = 0, hi = radii.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (feasible(radii[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    auto tables = run_center_dp(inst, nice, radii[lo], CenterMode::Exact, {});
    auto sol = extract_center_solution(inst, nice, tables);
    split_to_k(inst, sol, inst.k());
    sol.objective = Objective::Center;
    sol.value = evaluate_objective(inst, sol, Objective::Center);
    return sol;
}

std::vector<int> select_center_facilities(const Instance& inst) {
    std::vector<int> fac{0};
    std::vector<double> dist(inst.n());
    for (int v = 0; v < inst.n(); ++v) dist[v] = inst.d(v, 0);
    while ((int)fac.size() < inst.k()) {
        int far = -1;
        for (int v = 0; v < inst.n(); ++v) {
            if (std::find(fac.begin(), fac.end(), v) != fac.end()) continue;
            if (far == -1 || dist[v] > dist[far]) far = v;
        }
        fac.push_back(far);
        for (int v = 0; v < inst.n(); ++v) dist[v] = std::min(dist[v], inst.d(v, far));
    }
    return fac;
}

ClusteringSolution recover_centers(const Instance& inst,
                                   const ClusteringSolution& facility_sol) {
    ClusteringSolution sol = facility_sol;
    for (size_t i = 0; i < sol.clusters.size(); ++i) {
        const auto& cl = sol.clusters[i];
        if (cl.empty()) throw std::invalid_argument("empty cluster");
        int best = cl[0];
        for (int v : cl)
            if (inst.d(v, facility_sol.centers[i]) < inst.d(best, facility_sol.centers[i]))
                best = v;
        sol.centers[i] = best;
    }
    return sol;
}

ClusteringSolution solve_center_fpt(const Instance& inst, const NiceDecomposition& nice) {
    auto fac = select_center_facilities(inst);
    auto radii = candidate_radii(inst, CenterMode::Facility, fac);
    auto feasible = [&](double r) {
        auto c = feasible_cluster_count(inst, nice, r, CenterMode::Facility, fac);
        return c != kNoSolution && c <= inst.k();
    };
    if (!feasible(radii.back()))
        throw std::runtime_error("infeasible: more components than clusters");
    size_t lo = 0, hi = radii.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (feasible(radii[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    auto tables = run_center_dp(inst, nice, radii[lo], CenterMode::Facility, fac);
    auto sol = extract_center_solution(inst, nice, tables);
    sol = recover_centers(inst, sol);
    split_to_k(inst, sol, inst.k());
    sol.objective = Objective::Center;
    sol.value = evaluate_objective(inst, sol, Objective::Center);
    return sol;
}

}  // namespace conclust

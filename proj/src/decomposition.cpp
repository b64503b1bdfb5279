#include "conclust/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace conclust {

int TreeDecomposition::width() const {
    int w = -1;
    for (auto& b : bags) w = std::max(w, (int)b.size() - 1);
    return w;
}

DecompositionReport validate_decomposition(const Instance& inst,
                                           const TreeDecomposition& td) {
    DecompositionReport rep;
    int nb = (int)td.bags.size();
    for (auto [i, j] : td.tree_edges)
        if (i < 0 || j < 0 || i >= nb || j >= nb) {
            rep.problems.push_back("tree edge references invalid bag");
            return rep;
        }
    // tree structure: connected and acyclic over bags
    if ((int)td.tree_edges.size() != nb - 1)
        rep.problems.push_back("tree has wrong edge count");
    std::vector<std::vector<int>> tadj(nb);
    for (auto [i, j] : td.tree_edges) {
        tadj[i].push_back(j);
        tadj[j].push_back(i);
    }
    {
        std::vector<char> vis(nb, 0);
        std::deque<int> q{0};
        if (nb > 0) vis[0] = 1;
        int seen = nb > 0 ? 1 : 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : tadj[u])
                if (!vis[v]) {
                    vis[v] = 1;
                    ++seen;
                    q.push_back(v);
                }
        }
        if (seen != nb) rep.problems.push_back("tree not connected");
    }
    // vertex coverage
    std::vector<char> covered(inst.n(), 0);
    for (auto& b : td.bags)
        for (int v : b) {
            if (v < 0 || v >= inst.n()) {
                rep.problems.push_back("bag references invalid vertex");
                return rep;
            }
            covered[v] = 1;
        }
    for (int v = 0; v < inst.n(); ++v)
        if (!covered[v])
            rep.problems.push_back("vertex " + std::to_string(v) + " in no bag");
    // edge coverage
    for (auto [u, v] : inst.edges()) {
        bool found = false;
        for (auto& b : td.bags) {
            if (std::find(b.begin(), b.end(), u) != b.end() &&
                std::find(b.begin(), b.end(), v) != b.end()) {
                found = true;
                break;
            }
        }
        if (!found)
            rep.problems.push_back("edge {" + std::to_string(u) + "," +
                                   std::to_string(v) + "} uncovered");
    }
    // occurrences of each vertex form a connected subtree
    for (int v = 0; v < inst.n(); ++v) {
        std::vector<int> occ;
        for (int i = 0; i < nb; ++i)
            if (std::find(td.bags[i].begin(), td.bags[i].end(), v) != td.bags[i].end())
                occ.push_back(i);
        if (occ.empty()) continue;
        std::set<int> in_occ(occ.begin(), occ.end());
        std::set<int> vis;
        std::deque<int> q{occ[0]};
        vis.insert(occ[0]);
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int w : tadj[u])
                if (in_occ.count(w) && !vis.count(w)) {
                    vis.insert(w);
                    q.push_back(w);
                }
        }
        if (vis.size() != in_occ.size())
            rep.problems.push_back("occurrences of vertex " + std::to_string(v) +
                                   " not connected in tree");
    }
    rep.width = td.width();
    return rep;
}

TreeDecomposition heuristic_decomposition(const Instance& inst) {
    int n = inst.n();
    std::vector<std::set<int>> nb(n);
    for (auto [u, v] : inst.edges()) {
        nb[u].insert(v);
        nb[v].insert(u);
    }
    std::vector<char> gone(n, 0);
    std::vector<int> order;
    std::vector<std::vector<int>> bags(n);
    for (int step = 0; step < n; ++step) {
        // pick the remaining vertex whose elimination adds the fewest fill edges
        int best = -1;
        long best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            long fill = 0;
            std::vector<int> ns(nb[v].begin(), nb[v].end());
            for (size_t a = 0; a < ns.size(); ++a)
                for (size_t b = a + 1; b < ns.size(); ++b)
                    if (!nb[ns[a]].count(ns[b])) ++fill;
            if (best == -1 || fill < best_fill ||
                (fill == best_fill && nb[v].size() < nb[best].size())) {
                best = v;
                best_fill = fill;
            }
        }
        std::vector<int> ns(nb[best].begin(), nb[best].end());
        bags[best].push_back(best);
        bags[best].insert(bags[best].end(), ns.begin(), ns.end());
        std::sort(bags[best].begin(), bags[best].end());
        for (size_t a = 0; a < ns.size(); ++a)
            for (size_t b = a + 1; b < ns.size(); ++b) {
                nb[ns[a]].insert(ns[b]);
                nb[ns[b]].insert(ns[a]);
            }
        for (int u : ns) nb[u].erase(best);
        gone[best] = 1;
        order.push_back(best);
    }
    // bag of v connects to the bag of the first vertex of its bag eliminated later
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    TreeDecomposition td;
    std::vector<int> bag_id(n);
    for (int v : order) {
        bag_id[v] = (int)td.bags.size();
        td.bags.push_back(bags[v]);
    }
    for (int v : order) {
        int next = -1;
        for (int u : bags[v])
            if (u != v && (next == -1 || pos[u] < pos[next])) next = u;
        if (next != -1 && pos[next] > pos[v])
            td.tree_edges.push_back({bag_id[v], bag_id[next]});
    }
    // connect leftover roots (disconnected graphs) into one tree
    {
        int nbg = (int)td.bags.size();
        std::vector<int> parent(nbg);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto [i, j] : td.tree_edges) parent[find(i)] = find(j);
        for (int i = 1; i < nbg; ++i)
            if (find(i) != find(0)) {
                td.tree_edges.push_back({0, i});
                parent[find(i)] = find(0);
            }
    }
    return td;
}

namespace {

struct NiceBuilder {
    const Instance& inst;
    std::vector<NiceNode> nodes;

    int add(NodeType type, int a, int b, std::vector<int> bag, std::vector<int> children) {
        NiceNode nd;
        nd.type = type;
        nd.a = a;
        nd.b = b;
        nd.bag = std::move(bag);
        nd.children = std::move(children);
        nodes.push_back(std::move(nd));
        return (int)nodes.size() - 1;
    }

    int chain_from_empty(const std::vector<int>& bag) {
        int cur = add(NodeType::Leaf, -1, -1, {}, {});
        std::vector<int> cur_bag;
        for (int v : bag) {
            cur_bag.push_back(v);
            std::sort(cur_bag.begin(), cur_bag.end());
            cur = add(NodeType::IntroduceVertex, v, -1, cur_bag, {cur});
        }
        return cur;
    }

    int transform(int from, const std::vector<int>& target) {
        std::vector<int> cur_bag = nodes[from].bag;
        int cur = from;
        for (int v : nodes[from].bag)
            if (std::find(target.begin(), target.end(), v) == target.end()) {
                cur_bag.erase(std::find(cur_bag.begin(), cur_bag.end(), v));
                cur = add(NodeType::Forget, v, -1, cur_bag, {cur});
            }
        for (int v : target)
            if (std::find(cur_bag.begin(), cur_bag.end(), v) == cur_bag.end()) {
                cur_bag.push_back(v);
                std::sort(cur_bag.begin(), cur_bag.end());
                cur = add(NodeType::IntroduceVertex, v, -1, cur_bag, {cur});
            }
        return cur;
    }
};

}  // namespace

NiceDecomposition make_nice(const TreeDecomposition& td, const Instance& inst) {
    auto rep = validate_decomposition(inst, td);
    if (!rep.ok()) throw std::invalid_argument("invalid tree decomposition: " + rep.problems[0]);

    NiceBuilder nb{inst};
    int nbags = (int)td.bags.size();
    std::vector<std::vector<int>> tadj(nbags);
    for (auto [i, j] : td.tree_edges) {
        tadj[i].push_back(j);
        tadj[j].push_back(i);
    }
    std::vector<int> sorted_bag0;

    std::function<int(int, int)> build = [&](int bag_idx, int parent) -> int {
        std::vector<int> bag = td.bags[bag_idx];
        std::sort(bag.begin(), bag.end());
        std::vector<int> tops;
        for (int c : tadj[bag_idx])
            if (c != parent) {
                int sub = build(c, bag_idx);
                tops.push_back(nb.transform(sub, bag));
            }
        if (tops.empty()) return nb.chain_from_empty(bag);
        int cur = tops[0];
        for (size_t i = 1; i < tops.size(); ++i)
            cur = nb.add(NodeType::Join, -1, -1, bag, {cur, tops[i]});
        return cur;
    };

    int top = build(0, -1);
    int root = nb.transform(top, {});
    if (nb.nodes[root].bag.empty() && nb.nodes[root].type == NodeType::Leaf) {
        // single empty bag: nothing to do, root is the leaf itself
    }

    // parent pointers and depths on the pre-edge tree
    auto compute_parents = [&](int rt) {
        std::vector<int> parent(nb.nodes.size(), -1), depth(nb.nodes.size(), 0);
        std::deque<int> q{rt};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int c : nb.nodes[u].children) {
                parent[c] = u;
                depth[c] = depth[u] + 1;
                q.push_back(c);
            }
        }
        return std::pair{parent, depth};
    };
    auto [parent, depth] = compute_parents(root);

    // attach each graph edge at the deepest node whose bag holds both
    // endpoints; that node is always an IntroduceVertex of one of them
    for (auto [u, v] : inst.edges()) {
        int best = -1;
        for (int i = 0; i < (int)nb.nodes.size(); ++i) {
            const auto& bag = nb.nodes[i].bag;
            if (std::find(bag.begin(), bag.end(), u) == bag.end()) continue;
            if (std::find(bag.begin(), bag.end(), v) == bag.end()) continue;
            if (best == -1 || depth[i] > depth[best]) best = i;
        }
        int enode = nb.add(NodeType::IntroduceEdge, u, v, nb.nodes[best].bag, {best});
        int p = parent[best];
        // p exists: a node with a 2-element bag is never the empty-bag root
        auto& pc = nb.nodes[p].children;
        *std::find(pc.begin(), pc.end(), best) = enode;
        parent.push_back(p);
        depth.push_back(depth[best]);
        parent[best] = enode;
    }

    // renumber in post-order so children precede parents
    NiceDecomposition out;
    std::vector<int> remap(nb.nodes.size(), -1);
    std::function<void(int)> dfs = [&](int u) {
        for (int c : nb.nodes[u].children) dfs(c);
        remap[u] = (int)out.nodes.size();
        NiceNode nd = nb.nodes[u];
        for (auto& c : nd.children) c = remap[c];
        out.nodes.push_back(std::move(nd));
    };
    dfs(root);
    out.root = remap[root];
    out.width = 0;
    for (auto& nd : out.nodes) out.width = std::max(out.width, (int)nd.bag.size() - 1);

    out.subtree_vertices.assign(out.nodes.size(), DynBitset(inst.n()));
    for (size_t i = 0; i < out.nodes.size(); ++i) {
        for (int c : out.nodes[i].children)
            out.subtree_vertices[i] |= out.subtree_vertices[c];
        for (int v : out.nodes[i].bag) out.subtree_vertices[i].set(v);
    }
    return out;
}

NiceDecomposition nice_decomposition_for(const Instance& inst) {
    return make_nice(heuristic_decomposition(inst), inst);
}

std::vector<std::string> NiceDecomposition::check_invariants(const Instance& inst) const {
    std::vector<std::string> probs;
    if (root != (int)nodes.size() - 1 || root < 0) probs.push_back("root is not last node");
    if (!nodes[root].bag.empty()) probs.push_back("root bag not empty");
    std::vector<int> forgotten(inst.n(), 0);
    std::map<std::pair<int, int>, int> introduced_edges;
    for (size_t i = 0; i < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        if (!std::is_sorted(nd.bag.begin(), nd.bag.end())) probs.push_back("bag not sorted");
        auto bag_has = [&](const std::vector<int>& bag, int v) {
            return std::find(bag.begin(), bag.end(), v) != bag.end();
        };
        switch (nd.type) {
            case NodeType::Leaf:
                if (!nd.bag.empty()) probs.push_back("leaf bag not empty");
                if (!nd.children.empty()) probs.push_back("leaf with children");
                break;
            case NodeType::IntroduceVertex: {
                if (nd.children.size() != 1) { probs.push_back("introduce-vertex arity"); break; }
                auto child_bag = nodes[nd.children[0]].bag;
                if (!bag_has(nd.bag, nd.a) || bag_has(child_bag, nd.a) ||
                    nd.bag.size() != child_bag.size() + 1)
                    probs.push_back("introduce-vertex bag mismatch");
                break;
            }
            case NodeType::IntroduceEdge: {
                if (nd.children.size() != 1) { probs.push_back("introduce-edge arity"); break; }
                if (nodes[nd.children[0]].bag != nd.bag)
                    probs.push_back("introduce-edge changes bag");
                if (!bag_has(nd.bag, nd.a) || !bag_has(nd.bag, nd.b))
                    probs.push_back("introduce-edge endpoints not in bag");
                int u = std::min(nd.a, nd.b), v = std::max(nd.a, nd.b);
                introduced_edges[{u, v}]++;
                break;
            }
            case NodeType::Forget: {
                if (nd.children.size() != 1) { probs.push_back("forget arity"); break; }
                auto child_bag = nodes[nd.children[0]].bag;
                if (bag_has(nd.bag, nd.a) || !bag_has(child_bag, nd.a) ||
                    nd.bag.size() + 1 != child_bag.size())
                    probs.push_back("forget bag mismatch");
                forgotten[nd.a]++;
                break;
            }
            case NodeType::Join: {
                if (nd.children.size() != 2) { probs.push_back("join arity"); break; }
                if (nodes[nd.children[0]].bag != nd.bag || nodes[nd.children[1]].bag != nd.bag)
                    probs.push_back("join bags differ");
                break;
            }
        }
    }
    for (int v = 0; v < inst.n(); ++v)
        if (forgotten[v] != 1)
            probs.push_back("vertex " + std::to_string(v) + " forgotten " +
                            std::to_string(forgotten[v]) + " times");
    for (auto [u, v] : inst.edges()) {
        auto it = introduced_edges.find({std::min(u, v), std::max(u, v)});
        if (it == introduced_edges.end() || it->second != 1)
            probs.push_back("edge {" + std::to_string(u) + "," + std::to_string(v) +
                            "} not introduced exactly once");
    }
    if ((int)introduced_edges.size() != (int)inst.edges().size())
        probs.push_back("extra edges introduced");
    return probs;
}

}  // namespace conclust

#include "conclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace conclust {

const char* objective_name(Objective o) {
    switch (o) {
        case Objective::Center: return "center";
        case Objective::Median: return "median";
        case Objective::Means: return "means";
        case Objective::Msr: return "msr";
        case Objective::Msd: return "msd";
    }
    return "?";
}

std::optional<Objective> objective_from_name(const std::string& s) {
    if (s == "center") return Objective::Center;
    if (s == "median") return Objective::Median;
    if (s == "means") return Objective::Means;
    if (s == "msr") return Objective::Msr;
    if (s == "msd") return Objective::Msd;
    return std::nullopt;
}

namespace {
constexpr double kMetricTol = 1e-9;
}

Instance::Instance(int n, std::vector<std::pair<int, int>> edges,
                   std::vector<std::vector<double>> metric, int k,
                   bool check_triangle)
    : n_(n), k_(k), edges_(std::move(edges)), metric_(std::move(metric)) {
    if (n <= 0) throw std::invalid_argument("instance needs at least one vertex");
    if (k < 1 || k > n) throw std::invalid_argument("k must be in [1, n]");
    if ((int)metric_.size() != n)
        throw std::invalid_argument("metric matrix has wrong row count");
    for (int i = 0; i < n; ++i) {
        if ((int)metric_[i].size() != n)
            throw std::invalid_argument("metric matrix not square");
        if (std::abs(metric_[i][i]) > kMetricTol)
            throw std::invalid_argument("metric diagonal not zero");
        for (int j = 0; j < n; ++j) {
            if (metric_[i][j] < 0)
                throw std::invalid_argument("negative distance");
            if (std::abs(metric_[i][j] - metric_[j][i]) > kMetricTol)
                throw std::invalid_argument("metric not symmetric");
        }
    }
    if (check_triangle) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    if (metric_[i][j] > metric_[i][l] + metric_[l][j] + kMetricTol)
                        throw std::invalid_argument("triangle inequality violated");
    }
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges_) {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        if (!seen.insert({u, v}).second) throw std::invalid_argument("duplicate edge");
    }
    adj_.assign(n, {});
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
}

bool Instance::has_edge(int u, int v) const {
    for (int w : adj_[u])
        if (w == v) return true;
    return false;
}

std::vector<int> Instance::component_labels() const {
    std::vector<int> label(n_, -1);
    int next = 0;
    for (int s = 0; s < n_; ++s) {
        if (label[s] != -1) continue;
        std::deque<int> q{s};
        label[s] = next;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : adj_[u])
                if (label[v] == -1) {
                    label[v] = next;
                    q.push_back(v);
                }
        }
        ++next;
    }
    return label;
}

int Instance::component_count() const {
    auto l = component_labels();
    return l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
}

Instance Instance::with_k(int k) const {
    return Instance(n_, edges_, metric_, k, false);
}

Instance Instance::complete_graph_variant() const {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v) edges.push_back({u, v});
    return Instance(n_, std::move(edges), metric_, k_, false);
}

std::vector<std::vector<double>> metric_from_coords(
    const std::vector<std::vector<double>>& points, Norm norm) {
    int n = (int)points.size();
    if (n == 0) throw std::invalid_argument("no points");
    size_t dim = points[0].size();
    for (auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("dimension mismatch");
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0;
            for (size_t c = 0; c < dim; ++c) {
                double diff = std::abs(points[i][c] - points[j][c]);
                switch (norm) {
                    case Norm::L1: v += diff; break;
                    case Norm::L2: v += diff * diff; break;
                    case Norm::Linf: v = std::max(v, diff); break;
                }
            }
            if (norm == Norm::L2) v = std::sqrt(v);
            m[i][j] = m[j][i] = v;
        }
    return m;
}

ValidationReport validate_solution(const Instance& inst, const ClusteringSolution& sol,
                                   bool require_center_containment) {
    ValidationReport rep;
    std::vector<int> owner(inst.n(), -1);
    for (size_t i = 0; i < sol.clusters.size(); ++i) {
        if (sol.clusters[i].empty()) {
            rep.problems.push_back("cluster " + std::to_string(i) + " empty");
            continue;
        }
        for (int v : sol.clusters[i]) {
            if (v < 0 || v >= inst.n()) {
                rep.problems.push_back("cluster " + std::to_string(i) +
                                       " references invalid vertex");
                continue;
            }
            if (owner[v] != -1)
                rep.problems.push_back("not a partition: vertex " + std::to_string(v) +
                                       " in clusters " + std::to_string(owner[v]) + " and " +
                                       std::to_string(i));
            owner[v] = (int)i;
        }
    }
    for (int v = 0; v < inst.n(); ++v)
        if (owner[v] == -1)
            rep.problems.push_back("not a partition: vertex " + std::to_string(v) +
                                   " uncovered");
    // per-cluster connectivity via BFS on the induced subgraph
    for (size_t i = 0; i < sol.clusters.size(); ++i) {
        const auto& cl = sol.clusters[i];
        if (cl.empty()) continue;
        DynBitset in(inst.n()), vis(inst.n());
        for (int v : cl)
            if (v >= 0 && v < inst.n()) in.set(v);
        std::deque<int> q{cl[0]};
        vis.set(cl[0]);
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int w : inst.adj()[u])
                if (in.test(w) && !vis.test(w)) {
                    vis.set(w);
                    q.push_back(w);
                }
        }
        if (vis.count() != (int)cl.size())
            rep.problems.push_back("cluster " + std::to_string(i) + " disconnected");
    }
    if (!sol.centers.empty()) {
        if (sol.centers.size() != sol.clusters.size())
            rep.problems.push_back("centers/clusters index misalignment");
        else if (require_center_containment) {
            for (size_t i = 0; i < sol.centers.size(); ++i) {
                if (std::find(sol.clusters[i].begin(), sol.clusters[i].end(),
                              sol.centers[i]) == sol.clusters[i].end())
                    rep.problems.push_back("center of cluster " + std::to_string(i) +
                                           " outside cluster");
            }
        }
    }
    return rep;
}

double evaluate_objective(const Instance& inst, const ClusteringSolution& sol,
                          Objective tag) {
    bool needs_centers = tag != Objective::Msd;
    if (needs_centers) {
        if (sol.centers.empty())
            throw std::invalid_argument("objective requires centers");
        if (sol.centers.size() != sol.clusters.size())
            throw std::invalid_argument("centers/clusters index misalignment");
    }
    double total = 0.0;
    for (size_t i = 0; i < sol.clusters.size(); ++i) {
        const auto& cl = sol.clusters[i];
        switch (tag) {
            case Objective::Center:
            case Objective::Msr: {
                double r = 0;
                for (int v : cl) r = std::max(r, inst.d(v, sol.centers[i]));
                if (tag == Objective::Center)
                    total = std::max(total, r);
                else
                    total += r;
                break;
            }
            case Objective::Median:
            case Objective::Means: {
                for (int v : cl) {
                    double x = inst.d(v, sol.centers[i]);
                    total += tag == Objective::Median ? x : x * x;
                }
                break;
            }
            case Objective::Msd:
                total += cluster_diameter(inst, cl);
                break;
        }
    }
    return total;
}

std::pair<int, double> best_center_radius(const Instance& inst,
                                          const std::vector<int>& cluster) {
    int best = -1;
    double best_r = 0;
    for (int c : cluster) {
        double r = 0;
        for (int v : cluster) r = std::max(r, inst.d(c, v));
        if (best == -1 || r < best_r) {
            best = c;
            best_r = r;
        }
    }
    return {best, best_r};
}

double cluster_diameter(const Instance& inst, const std::vector<int>& cluster) {
    double d = 0;
    for (size_t a = 0; a < cluster.size(); ++a)
        for (size_t b = a + 1; b < cluster.size(); ++b)
            d = std::max(d, inst.d(cluster[a], cluster[b]));
    return d;
}

}  // namespace conclust

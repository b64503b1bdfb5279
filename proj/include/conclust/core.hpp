#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conclust/util.hpp"

namespace conclust {

enum class Objective { Center, Median, Means, Msr, Msd };

const char* objective_name(Objective o);
std::optional<Objective> objective_from_name(const std::string& s);

enum class Norm { L1, L2, Linf };

/// Clustering instance: connectivity graph + metric + target cluster count.
/// The metric is always held as an explicit symmetric matrix; coordinate
/// input is converted on construction.
class Instance {
public:
    Instance(int n, std::vector<std::pair<int, int>> edges,
             std::vector<std::vector<double>> metric, int k,
             bool check_triangle = true);

    int n() const { return n_; }
    int k() const { return k_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    double d(int u, int v) const { return metric_[u][v]; }
    const std::vector<std::vector<double>>& metric() const { return metric_; }
    const std::vector<std::vector<int>>& adj() const { return adj_; }

    bool has_edge(int u, int v) const;
    int component_count() const;
    std::vector<int> component_labels() const;

    /// Same graph/metric with a different k.
    Instance with_k(int k) const;
    /// Same vertices/metric on the complete graph (unconstrained clustering).
    Instance complete_graph_variant() const;

private:
    int n_;
    int k_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<double>> metric_;
    std::vector<std::vector<int>> adj_;
};

std::vector<std::vector<double>> metric_from_coords(
    const std::vector<std::vector<double>>& points, Norm norm);

struct ClusteringSolution {
    std::vector<std::vector<int>> clusters;
    std::vector<int> centers;  // empty when unused (msd); aligned by index otherwise
    Objective objective = Objective::Center;
    double value = 0.0;
};

/// Structural validation report; empty `problems` means feasible.
struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

/// Checks partition structure, per-cluster connectivity and (when
/// require_center_containment) that centers[i] lies in clusters[i].
ValidationReport validate_solution(const Instance& inst, const ClusteringSolution& sol,
                                   bool require_center_containment = true);

double evaluate_objective(const Instance& inst, const ClusteringSolution& sol,
                          Objective tag);

/// Best in-cluster center for a vertex set under the center/msr radius
/// objective; returns (center, radius).
std::pair<int, double> best_center_radius(const Instance& inst, const std::vector<int>& cluster);
double cluster_diameter(const Instance& inst, const std::vector<int>& cluster);

}  // namespace conclust

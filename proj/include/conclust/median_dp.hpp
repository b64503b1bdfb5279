#pragma once

#include <vector>

#include "conclust/core.hpp"
#include "conclust/decomposition.hpp"
#include "conclust/partition.hpp"

namespace conclust {

enum class MedianMode { Median, Means };  // cost d or d^2

/// Budgeted DP tables, kept for backtracking and inspection. The key of an
/// entry is (budget, assign, part); budget counts finished clusters.
struct MedianDpTables {
    struct Entry {
        int budget;
        std::vector<int> assign;
        Rgs part;
        double cost;  // absent keys mean infinity
        int c1 = -1, c2 = -1;
    };
    std::vector<std::vector<Entry>> per_node;
    double root_cost = -1;  // cost at root budget k, -1 if infeasible
};

MedianDpTables run_median_dp(const Instance& inst, const NiceDecomposition& nice,
                             const std::vector<int>& facilities, MedianMode mode);

/// Optimal facility-restricted solution (facility containment waived).
ClusteringSolution solve_median_facilities(const Instance& inst,
                                           const NiceDecomposition& nice,
                                           const std::vector<int>& facilities,
                                           MedianMode mode);

/// Unconstrained discrete k-median/k-means by single-swap local search
/// (relative improvement threshold 1e-4). Returns the facility set and the
/// certified approximation factor (5 for median, 25 for means).
std::pair<std::vector<int>, double> select_facilities_median(const Instance& inst,
                                                             MedianMode mode);

double facility_cost(const Instance& inst, const std::vector<int>& fac, MedianMode mode);

ClusteringSolution solve_median_fpt(const Instance& inst, const NiceDecomposition& nice);
ClusteringSolution solve_means_fpt(const Instance& inst, const NiceDecomposition& nice);

}  // namespace conclust

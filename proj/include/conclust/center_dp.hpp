#pragma once

#include <vector>

#include "conclust/core.hpp"
#include "conclust/decomposition.hpp"
#include "conclust/partition.hpp"

namespace conclust {

enum class CenterMode { Exact, Facility };

/// Marker for "no solution at any cluster count".
inline constexpr long long kNoSolution = -1;

/// Exact mode: all pairwise distances plus 0. Facility mode: all
/// vertex-facility distances plus 0. Sorted, deduplicated.
std::vector<double> candidate_radii(const Instance& inst, CenterMode mode,
                                    const std::vector<int>& facilities = {});

/// DP tables for one radius, kept for backtracking and inspection.
/// Entries are grouped per nice-decomposition node; c1/c2 index into the
/// child node's entry list (c2 only for joins).
struct CenterDpTables {
    struct Entry {
        std::vector<int> assign;  // aligned to the node's sorted bag
        Rgs part;
        long long value;  // finished clusters; absent keys mean infinity
        int c1 = -1, c2 = -1;
    };
    std::vector<std::vector<Entry>> per_node;
    long long root_value = kNoSolution;
};

CenterDpTables run_center_dp(const Instance& inst, const NiceDecomposition& nice,
                             double r, CenterMode mode,
                             const std::vector<int>& facilities = {});

/// Minimum number of clusters covering G with radius r (kNoSolution if none).
long long feasible_cluster_count(const Instance& inst, const NiceDecomposition& nice,
                                 double r, CenterMode mode,
                                 const std::vector<int>& facilities = {});

/// Walks the backpointers of a feasible run and materializes clusters and
/// their centers (facilities in facility mode). Throws if infeasible.
ClusteringSolution extract_center_solution(const Instance& inst,
                                           const NiceDecomposition& nice,
                                           const CenterDpTables& tables);

/// Splits clusters (peeling spanning-tree leaves into singletons) until the
/// solution has exactly k clusters. Never increases any objective.
void split_to_k(const Instance& inst, ClusteringSolution& sol, int k);

ClusteringSolution solve_center_exact(const Instance& inst, const NiceDecomposition& nice);

/// Farthest-first traversal from vertex 0; k facilities, 2-approximate
/// unconstrained k-center.
std::vector<int> select_center_facilities(const Instance& inst);

/// Replaces each cluster's facility by the in-cluster vertex closest to it;
/// at most doubles the radius.
ClusteringSolution recover_centers(const Instance& inst, const ClusteringSolution& facility_sol);

/// 6-approximation: facility selection, facility DP, center recovery.
ClusteringSolution solve_center_fpt(const Instance& inst, const NiceDecomposition& nice);

}  // namespace conclust

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "conclust/core.hpp"

namespace conclust {

struct OracleConfig {
    int max_n = 10;
    long long max_partitions = 10'000'000;
};

/// Every partition of V into at most k nonempty connected blocks, blocks
/// ordered by minimum element. Callback form; return false to stop early.
void enumerate_connected_partitions(
    const Instance& inst, int k,
    const std::function<bool(const std::vector<std::vector<int>>&)>& cb,
    const OracleConfig& config = {});

std::vector<std::vector<std::vector<int>>> connected_partitions(
    const Instance& inst, int k, const OracleConfig& config = {});

/// Exhaustive reference solver. With `facilities` set, centers are drawn
/// from it and containment is waived; otherwise centers are in-cluster.
/// Ties broken by canonical partition enumeration order.
ClusteringSolution oracle_solve(const Instance& inst, Objective tag,
                                const std::optional<std::vector<int>>& facilities = {},
                                const OracleConfig& config = {});

/// Assignment variant: the given centers are fixed, each in its own
/// cluster; every other vertex is assigned to one of them.
ClusteringSolution oracle_solve_assignment(const Instance& inst,
                                           const std::vector<int>& centers,
                                           Objective tag);

}  // namespace conclust

#pragma once

#include <string>
#include <vector>

#include "conclust/core.hpp"
#include "conclust/util.hpp"

namespace conclust {

struct TreeDecomposition {
    std::vector<std::vector<int>> bags;
    std::vector<std::pair<int, int>> tree_edges;

    int width() const;
};

struct DecompositionReport {
    std::vector<std::string> problems;
    int width = -1;
    bool ok() const { return problems.empty(); }
};

DecompositionReport validate_decomposition(const Instance& inst,
                                           const TreeDecomposition& td);

/// Min-fill elimination ordering; no optimality claim on the width.
TreeDecomposition heuristic_decomposition(const Instance& inst);

enum class NodeType { Leaf, IntroduceVertex, IntroduceEdge, Forget, Join };

struct NiceNode {
    NodeType type;
    int a = -1, b = -1;           // vertex (introduce/forget) or edge endpoints
    std::vector<int> bag;         // sorted
    std::vector<int> children;    // node ids
};

/// Rooted nice decomposition; nodes stored in an order where children
/// precede parents (node ids are valid indexes into nodes).
struct NiceDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;
    int width = -1;
    std::vector<DynBitset> subtree_vertices;  // V_t per node

    std::vector<std::string> check_invariants(const Instance& inst) const;
};

NiceDecomposition make_nice(const TreeDecomposition& td, const Instance& inst);

/// Convenience: heuristic decomposition plus nice-ification.
NiceDecomposition nice_decomposition_for(const Instance& inst);

}  // namespace conclust

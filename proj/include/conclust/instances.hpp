#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conclust/core.hpp"
#include "conclust/decomposition.hpp"

namespace conclust {

/// Position tuple for the layered gadget metric; entry 0 encodes the blank
/// symbol, entries 1..S_i are real coordinates.
using LayeredPosition = std::vector<int>;

/// Sum of per-coordinate distances: 0 equal, 1 when exactly one side is
/// blank, 2 otherwise.
double layered_distance(const LayeredPosition& p, const LayeredPosition& q);

/// CNF with at most three literals per clause. Literal +i is variable i,
/// -i its negation (1-based).
struct Cnf {
    int vars = 0;
    std::vector<std::vector<int>> clauses;
};

/// Parses "x1 | -x2 & x3". Clauses split on '&', literals on '|' or ',';
/// negation is '-' or '!'.
Cnf parse_cnf(const std::string& text);

bool cnf_satisfiable(const Cnf& f);  // brute force, vars <= 30

/// S_1 = 2, S_{l+1} = (S_l - 1) * 2 * prod C(S_{i+1}, S_i) + 1. Throws
/// std::overflow_error when a value exceeds 64 bits (L >= 5).
std::vector<unsigned long long> compute_S(int L);

struct HardnessParams {
    int L = 1;
    Cnf formula;
    unsigned long long max_vertices = 100000;
};

/// Exact vertex count of the layered gadget (saturating at 2^63).
unsigned long long hardness_vertex_count(int L, int vars, int clauses);

struct HardnessInstance {
    Instance inst;
    std::vector<int> centers;
    std::vector<LayeredPosition> positions;  // per vertex
};

/// Layered SAT gadget. A satisfiable formula admits an assignment to the
/// designated centers of radius 1; an unsatisfiable one forces radius
/// >= 2L. Practical for L=1; L=2 only for very small formulas.
HardnessInstance gen_hardness(const HardnessParams& params);

/// Fixed-center instance rewritten for free-center solvers: k+1 copies of
/// the non-center vertices, single copies of the centers, distances
/// inherited. Center-to-center edges are dropped first.
struct Reduction {
    Instance reduced;
    std::vector<int> centers;     // original ids, cluster order of map-back
    std::vector<int> noncenters;  // original ids of the copied vertices
    int copies = 0;               // k + 1
};

Reduction assignment_to_free_reduction(const Instance& inst,
                                       const std::vector<int>& centers);

/// Converts a free-center solution on the reduced instance into a
/// connected assignment to the original centers, at most doubling the
/// radius: pick a copy layer containing no chosen center, split each
/// cluster's trace on that layer into components and run a multi-source
/// shortest-path assignment from the in-component centers.
ClusteringSolution map_back_assignment(const Instance& inst, const Reduction& red,
                                       const ClusteringSolution& free_sol);

Instance gen_random_geometric(int n, int k, double radius, uint64_t seed);
Instance gen_random_tree(int n, int k, uint64_t seed);

struct KtreeResult {
    Instance inst;
    TreeDecomposition decomposition;  // width <= w by construction
};

/// k-tree of width w with every non-backbone edge kept with probability
/// 1/2; the defining decomposition is returned alongside.
KtreeResult gen_partial_ktree(int n, int k, int w, uint64_t seed);

}  // namespace conclust

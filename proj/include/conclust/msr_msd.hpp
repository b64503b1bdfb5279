#pragma once

#include <optional>
#include <vector>

#include "conclust/core.hpp"
#include "conclust/util.hpp"

namespace conclust {

/// Candidate cluster seed: a center vertex and a radius taken from the
/// distance matrix (or 0).
struct BallPair {
    int v;
    double r;
};

struct DualState {
    double lambda = 0.0;
    std::vector<double> alpha;  // indexed by vertex, nonzero only on V'
    double mu = 0.0;
};

struct BallComponent {
    std::vector<BallPair> pairs;
    DynBitset verts;  // union of the connected balls
    double rad = 0.0, diam = 0.0, sr = 0.0, dsr = 0.0;
    bool dsr_exact = true;
    int center = -1;
};

struct MsrConfig {
    double eps = 0.5;
    int max_guess = 3;        // cap on ceil(1/eps)
    int dsr_exact_limit = 20; // pairs; larger components fall back to sr/2
};

struct MsrReport {
    std::vector<BallPair> guess;
    double lambda = 0.0;
    std::vector<BallComponent> components;
    bool greedy_extra = false;  // condition 3 needed more than one extra pair
    bool dsr_inexact = false;   // some component exceeded the exact dsr limit
    int guesses_tried = 0;
};

/// Vertices reachable from v along paths that stay within distance r of v.
DynBitset connected_ball(const Instance& inst, int v, double r);

/// All pairs (v, d(v,w)), deduplicated per center.
std::vector<BallPair> enumerate_pairs(const Instance& inst);

/// Synchronized uniform dual growth at a fixed lambda. Returns the dual
/// values and the pairs that went tight, in tightening order; their balls
/// cover vprime. Empty optional when the pairs cannot cover vprime.
std::optional<std::pair<std::vector<double>, std::vector<int>>> grow_duals(
    const Instance& inst, const DynBitset& vprime, const std::vector<BallPair>& pool,
    double lambda, double mu);

struct StructuredPairs {
    DualState dual;
    std::vector<BallPair> cover;        // almost-tight pairs covering vprime
    std::vector<BallPair> extra;        // empty = sentinel (no pair needed)
    bool greedy = false;                // more than one extra pair was required
};

/// Binary search over lambda for a tight cover straddling kprime components,
/// plus the extra pair that brings the count to at most kprime.
std::optional<StructuredPairs> find_structured_pairs(const Instance& inst,
                                                     const DynBitset& vprime,
                                                     const std::vector<BallPair>& pool,
                                                     int kprime, double mu);

/// Connected components of the ball-overlap graph.
std::vector<BallComponent> components(const Instance& inst,
                                      const std::vector<BallPair>& pairs);

/// Max-weight set of pairwise disjoint balls (weights = radii). Exact up to
/// `exact_limit` pairs, otherwise the sr/2 lower bound with exact = false.
std::pair<double, bool> disjoint_sum_radii(const Instance& inst,
                                           const BallComponent& comp, int exact_limit);

/// Fills rad/diam/sr/dsr/center for each component and checks the merge
/// bounds rad <= 3*dsr, diam <= 4*dsr (exact dsr only).
void merge_and_evaluate(const Instance& inst, std::vector<BallComponent>& comps,
                        int dsr_exact_limit);

struct MsrResult {
    ClusteringSolution solution;
    MsrReport report;
};

MsrResult solve_msr(const Instance& inst, const MsrConfig& cfg = {});
MsrResult solve_msd(const Instance& inst, const MsrConfig& cfg = {});
/// MSD without connectivity constraints (complete connectivity graph).
MsrResult solve_msd_unconstrained(const Instance& inst, const MsrConfig& cfg = {});

}  // namespace conclust

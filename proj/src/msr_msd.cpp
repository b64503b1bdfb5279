#include "conclust/msr_msd.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace conclust {

namespace {

constexpr double kTol = 1e-9;

struct Ctx {
    const Instance& inst;
    std::vector<BallPair> pairs;
    std::vector<DynBitset> balls;
};

Ctx make_ctx(const Instance& inst, std::vector<BallPair> pairs) {
    Ctx ctx{inst, std::move(pairs), {}};
    ctx.balls.reserve(ctx.pairs.size());
    for (const auto& p : ctx.pairs)
        ctx.balls.push_back(connected_ball(inst, p.v, p.r));
    return ctx;
}

// Uniform growth over precomputed balls restricted to vprime.
std::optional<std::pair<std::vector<double>, std::vector<int>>> grow_core(
    const Ctx& ctx, const DynBitset& vprime, const std::vector<int>& pool,
    double lambda, double mu) {
    int n = ctx.inst.n();
    std::vector<std::vector<int>> members(pool.size());
    std::vector<std::vector<int>> pair_of(n);  // pool slots containing vertex
    for (size_t i = 0; i < pool.size(); ++i)
        for (int u = 0; u < n; ++u)
            if (vprime.test(u) && ctx.balls[pool[i]].test(u)) {
                members[i].push_back(u);
                pair_of[u].push_back((int)i);
            }

    std::vector<double> alpha(n, 0.0);
    std::vector<char> covered(n, 0), tight(pool.size(), 0);
    std::vector<double> frozen(pool.size(), 0.0);
    std::vector<int> active(pool.size(), 0);
    for (size_t i = 0; i < pool.size(); ++i) {
        active[i] = (int)members[i].size();
        if (members[i].empty()) tight[i] = 1;  // never a cover candidate
    }
    int uncovered = vprime.count();
    std::vector<int> order;
    double t = 0.0;

    auto freeze_ball = [&](size_t i) {
        tight[i] = 1;
        order.push_back(pool[i]);
        for (int u : members[i]) {
            if (covered[u]) continue;
            covered[u] = 1;
            alpha[u] = t;
            --uncovered;
            for (int j : pair_of[u]) {
                --active[j];
                frozen[j] += t;
            }
        }
    };

    while (uncovered > 0) {
        // pairs already at their target tighten without growth
        bool fired = true;
        while (fired) {
            fired = false;
            for (size_t i = 0; i < pool.size(); ++i) {
                if (tight[i]) continue;
                double target = ctx.pairs[pool[i]].r + lambda - mu;
                if (frozen[i] + active[i] * t >= target - 1e-12) {
                    freeze_ball(i);
                    fired = true;
                }
            }
        }
        if (uncovered == 0) break;
        size_t best = pool.size();
        double best_t = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < pool.size(); ++i) {
            if (tight[i] || active[i] == 0) continue;
            // sum(t) = frozen + active*t with every live alpha equal to t
            double target = ctx.pairs[pool[i]].r + lambda - mu;
            double ti = std::max((target - frozen[i]) / active[i], t);
            if (ti < best_t) {
                best_t = ti;
                best = i;
            }
        }
        if (best == pool.size()) return std::nullopt;  // vprime not coverable
        t = best_t;
        freeze_ball(best);
    }
    return std::make_pair(std::move(alpha), std::move(order));
}

// Union-find component count / labels over ball overlap, for pool slots.
std::vector<int> overlap_labels(const Ctx& ctx, const std::vector<int>& idx) {
    std::vector<int> parent(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j)
            if (ctx.balls[idx[i]].intersects(ctx.balls[idx[j]])) {
                int a = find((int)i), b = find((int)j);
                if (a != b) parent[a] = b;
            }
    std::vector<int> label(idx.size());
    std::map<int, int> relabel;
    for (size_t i = 0; i < idx.size(); ++i) {
        int r = find((int)i);
        label[i] = relabel.try_emplace(r, (int)relabel.size()).first->second;
    }
    return label;
}

int overlap_component_count(const Ctx& ctx, const std::vector<int>& idx) {
    auto lab = overlap_labels(ctx, idx);
    return lab.empty() ? 0 : 1 + *std::max_element(lab.begin(), lab.end());
}

std::optional<StructuredPairs> structured_core(const Ctx& ctx, const DynBitset& vprime,
                                               const std::vector<int>& pool, int kprime,
                                               double mu) {
    auto take = [&](const std::vector<int>& idx) {
        std::vector<BallPair> out;
        for (int i : idx) out.push_back(ctx.pairs[i]);
        return out;
    };
    auto grow = [&](double lambda) { return grow_core(ctx, vprime, pool, lambda, mu); };

    auto at0 = grow(0.0);
    if (!at0) return std::nullopt;
    if (kprime <= 0) return std::nullopt;
    if (overlap_component_count(ctx, at0->second) <= kprime)
        return StructuredPairs{{0.0, std::move(at0->first), mu}, take(at0->second), {}, false};

    double max_r = 0.0;
    for (int i : pool) max_r = std::max(max_r, ctx.pairs[i].r);
    double lo = 0.0, hi = std::max(max_r, mu);
    auto at_hi = grow(hi);
    for (int grow_try = 0; grow_try < 8; ++grow_try) {
        if (at_hi && overlap_component_count(ctx, at_hi->second) <= kprime) break;
        hi *= 2;
        at_hi = grow(hi);
    }
    if (!at_hi || overlap_component_count(ctx, at_hi->second) > kprime)
        return std::nullopt;

    double prec = std::max(mu / (double)(ctx.inst.n() * ctx.inst.n()), 1e-12 * (1 + hi));
    for (int it = 0; it < 100 && hi - lo > prec; ++it) {
        double mid = (lo + hi) / 2;
        auto am = grow(mid);
        if (am && overlap_component_count(ctx, am->second) <= kprime) {
            hi = mid;
            at_hi = std::move(am);
        } else {
            lo = mid;
        }
    }
    auto at_lo = grow(lo);
    if (!at_lo) return std::nullopt;
    std::vector<int> cover = at_lo->second;
    StructuredPairs out{{lo, std::move(at_lo->first), mu}, take(cover), {}, false};

    std::vector<int> cand;
    for (int i : at_hi->second)
        if (std::find(cover.begin(), cover.end(), i) == cover.end()) cand.push_back(i);
    std::vector<int> merged = cover;
    for (int c : cand) {
        merged.push_back(c);
        if (overlap_component_count(ctx, merged) <= kprime) {
            out.extra = take({c});
            return out;
        }
        merged.pop_back();
    }
    // no single extra pair suffices: add greedily, flag the degradation
    out.greedy = true;
    while (overlap_component_count(ctx, merged) > kprime && !cand.empty()) {
        int pick = -1, pick_comps = std::numeric_limits<int>::max();
        for (size_t ci = 0; ci < cand.size(); ++ci) {
            merged.push_back(cand[ci]);
            int c = overlap_component_count(ctx, merged);
            merged.pop_back();
            if (c < pick_comps) {
                pick_comps = c;
                pick = (int)ci;
            }
        }
        merged.push_back(cand[pick]);
        out.extra.push_back(ctx.pairs[cand[pick]]);
        cand.erase(cand.begin() + pick);
    }
    if (overlap_component_count(ctx, merged) > kprime) return std::nullopt;
    return out;
}

std::vector<BallComponent> components_core(const Ctx& ctx, const std::vector<int>& idx) {
    auto lab = overlap_labels(ctx, idx);
    int nc = lab.empty() ? 0 : 1 + *std::max_element(lab.begin(), lab.end());
    std::vector<BallComponent> out(nc);
    for (auto& c : out) c.verts = DynBitset(ctx.inst.n());
    for (size_t i = 0; i < idx.size(); ++i) {
        out[lab[i]].pairs.push_back(ctx.pairs[idx[i]]);
        out[lab[i]].verts |= ctx.balls[idx[i]];
    }
    return out;
}

// exact max-weight independent set on <= 64 pairs, plain branch and bound
double mwis(const std::vector<uint64_t>& adj, const std::vector<double>& w,
            uint64_t mask) {
    if (!mask) return 0.0;
    int v = __builtin_ctzll(mask);
    uint64_t rest = mask & ~(uint64_t{1} << v);
    double skip = mwis(adj, w, rest);
    double pick = w[v] + mwis(adj, w, rest & ~adj[v]);
    return std::max(skip, pick);
}

}  // namespace

DynBitset connected_ball(const Instance& inst, int v, double r) {
    DynBitset in(inst.n());
    in.set(v);
    std::deque<int> q{v};
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : inst.adj()[u])
            if (!in.test(w) && inst.d(v, w) <= r + kTol) {
                in.set(w);
                q.push_back(w);
            }
    }
    return in;
}

std::vector<BallPair> enumerate_pairs(const Instance& inst) {
    std::vector<BallPair> out;
    for (int v = 0; v < inst.n(); ++v) {
        std::vector<double> radii;
        radii.push_back(0.0);
        for (int w = 0; w < inst.n(); ++w) radii.push_back(inst.d(v, w));
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end(),
                                [](double a, double b) { return std::abs(a - b) <= kTol; }),
                    radii.end());
        for (double r : radii) out.push_back({v, r});
    }
    return out;
}

std::optional<std::pair<std::vector<double>, std::vector<int>>> grow_duals(
    const Instance& inst, const DynBitset& vprime, const std::vector<BallPair>& pool,
    double lambda, double mu) {
    Ctx ctx = make_ctx(inst, pool);
    std::vector<int> idx(pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    return grow_core(ctx, vprime, idx, lambda, mu);
}

std::optional<StructuredPairs> find_structured_pairs(const Instance& inst,
                                                     const DynBitset& vprime,
                                                     const std::vector<BallPair>& pool,
                                                     int kprime, double mu) {
    Ctx ctx = make_ctx(inst, pool);
    std::vector<int> idx(pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    return structured_core(ctx, vprime, idx, kprime, mu);
}

std::vector<BallComponent> components(const Instance& inst,
                                      const std::vector<BallPair>& pairs) {
    Ctx ctx = make_ctx(inst, pairs);
    std::vector<int> idx(pairs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    return components_core(ctx, idx);
}

std::pair<double, bool> disjoint_sum_radii(const Instance& inst,
                                           const BallComponent& comp, int exact_limit) {
    int m = (int)comp.pairs.size();
    double sr = 0.0;
    for (const auto& p : comp.pairs) sr += p.r;
    if (m > exact_limit || m > 63) return {sr / 2.0, false};
    std::vector<DynBitset> balls;
    for (const auto& p : comp.pairs) balls.push_back(connected_ball(inst, p.v, p.r));
    std::vector<uint64_t> adj(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (balls[i].intersects(balls[j])) {
                adj[i] |= uint64_t{1} << j;
                adj[j] |= uint64_t{1} << i;
            }
    std::vector<double> w;
    for (const auto& p : comp.pairs) w.push_back(p.r);
    uint64_t all = m == 64 ? ~uint64_t{0} : (uint64_t{1} << m) - 1;
    return {mwis(adj, w, all), true};
}

void merge_and_evaluate(const Instance& inst, std::vector<BallComponent>& comps,
                        int dsr_exact_limit) {
    for (size_t i = 0; i < comps.size(); ++i)
        for (size_t j = i + 1; j < comps.size(); ++j)
            if (comps[i].verts.intersects(comps[j].verts))
                throw std::logic_error("component vertex sets overlap");
    for (auto& c : comps) {
        c.sr = 0.0;
        for (const auto& p : c.pairs) c.sr += p.r;
        auto [dsr, exact] = disjoint_sum_radii(inst, c, dsr_exact_limit);
        c.dsr = dsr;
        c.dsr_exact = exact;
        auto verts = c.verts.to_vector();
        auto [center, rad] = best_center_radius(inst, verts);
        c.center = center;
        c.rad = rad;
        c.diam = cluster_diameter(inst, verts);
        if (exact) {
            double tol = 1e-6 * (1 + c.dsr);
            if (c.rad > 3 * c.dsr + tol || c.diam > 4 * c.dsr + tol)
                throw std::logic_error("merge bound violated");
        }
    }
}

namespace {

MsrResult run_primal_dual(const Instance& inst, const MsrConfig& cfg, Objective obj) {
    if (cfg.eps <= 0) throw std::invalid_argument("eps must be positive");
    int n = inst.n(), k = inst.k();
    if (inst.component_count() > k)
        throw std::runtime_error("infeasible: more components than clusters");

    Ctx ctx = make_ctx(inst, enumerate_pairs(inst));
    // sort by radius descending so guess tuples come out non-increasing
    {
        std::vector<int> ord(ctx.pairs.size());
        for (size_t i = 0; i < ord.size(); ++i) ord[i] = (int)i;
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
            if (ctx.pairs[a].r != ctx.pairs[b].r) return ctx.pairs[a].r > ctx.pairs[b].r;
            return ctx.pairs[a].v < ctx.pairs[b].v;
        });
        std::vector<BallPair> ps;
        std::vector<DynBitset> bs;
        for (int i : ord) {
            ps.push_back(ctx.pairs[i]);
            bs.push_back(std::move(ctx.balls[i]));
        }
        ctx.pairs = std::move(ps);
        ctx.balls = std::move(bs);
    }
    int m = (int)ctx.pairs.size();
    double max_r = ctx.pairs.empty() ? 0.0 : ctx.pairs.front().r;
    int g = std::min({cfg.max_guess, (int)std::ceil(1.0 / cfg.eps), k});

    bool have_best = false;
    double best_value = 0.0;
    MsrResult best;
    // structured-pairs results are determined by (vprime, pool cutoff, kprime)
    std::map<std::tuple<std::vector<int>, double, int>, std::optional<StructuredPairs>>
        cache;

    auto consider = [&](const std::vector<int>& guess_idx) {
        int t = (int)guess_idx.size();
        int kprime = k - t;
        DynBitset covered(n);
        for (int gi : guess_idx) covered |= ctx.balls[gi];
        DynBitset vprime(n);
        for (int v = 0; v < n; ++v)
            if (!covered.test(v)) vprime.set(v);
        double r_small = t > 0 ? ctx.pairs[guess_idx.back()].r : max_r;
        double mu = r_small / (double)(n * n);

        std::optional<StructuredPairs> sp;
        bool need_cover = vprime.any();
        if (need_cover) {
            if (kprime <= 0) return;
            auto key = std::make_tuple(vprime.to_vector(), r_small, kprime);
            auto it = cache.find(key);
            if (it == cache.end()) {
                std::vector<int> pool;
                for (int i = 0; i < m; ++i)
                    if (ctx.pairs[i].r <= r_small + kTol) pool.push_back(i);
                it = cache.emplace(key, structured_core(ctx, vprime, pool, kprime, mu))
                         .first;
            }
            sp = it->second;
            if (!sp) return;
        }

        std::vector<BallPair> sprime;
        if (sp) {
            sprime = sp->cover;
            sprime.insert(sprime.end(), sp->extra.begin(), sp->extra.end());
        }
        for (int gi : guess_idx) sprime.push_back(ctx.pairs[gi]);
        auto comps = components(inst, sprime);
        if ((int)comps.size() > k || comps.empty()) return;
        // every vertex must land in some ball
        DynBitset all(n);
        for (auto& c : comps) all |= c.verts;
        if (all.count() != n) return;
        merge_and_evaluate(inst, comps, cfg.dsr_exact_limit);

        double value = 0.0;
        for (auto& c : comps) value += obj == Objective::Msr ? c.rad : c.diam;
        if (have_best && value >= best_value - 1e-12) return;
        have_best = true;
        best_value = value;
        ClusteringSolution sol;
        for (auto& c : comps) {
            sol.clusters.push_back(c.verts.to_vector());
            if (obj == Objective::Msr) sol.centers.push_back(c.center);
        }
        sol.objective = obj;
        sol.value = value;
        MsrReport rep;
        for (int gi : guess_idx) rep.guess.push_back(ctx.pairs[gi]);
        rep.lambda = sp ? sp->dual.lambda : 0.0;
        rep.greedy_extra = sp && sp->greedy;
        for (auto& c : comps) rep.dsr_inexact = rep.dsr_inexact || !c.dsr_exact;
        rep.components = std::move(comps);
        best = {std::move(sol), std::move(rep)};
    };

    int tried = 0;
    std::vector<int> guess_idx;
    std::function<void(int, int)> rec = [&](int start, int remaining) {
        ++tried;
        consider(guess_idx);
        if (remaining == 0) return;
        for (int i = start; i < m; ++i) {
            guess_idx.push_back(i);
            rec(i, remaining - 1);
            guess_idx.pop_back();
        }
    };
    rec(0, g);

    if (!have_best) throw std::runtime_error("no feasible guess");
    best.report.guesses_tried = tried;
    return best;
}

}  // namespace

MsrResult solve_msr(const Instance& inst, const MsrConfig& cfg) {
    return run_primal_dual(inst, cfg, Objective::Msr);
}

MsrResult solve_msd(const Instance& inst, const MsrConfig& cfg) {
    return run_primal_dual(inst, cfg, Objective::Msd);
}

MsrResult solve_msd_unconstrained(const Instance& inst, const MsrConfig& cfg) {
    return run_primal_dual(inst.complete_graph_variant(), cfg, Objective::Msd);
}

}  // namespace conclust

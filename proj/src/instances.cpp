#include "conclust/instances.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

namespace conclust {

double layered_distance(const LayeredPosition& p, const LayeredPosition& q) {
    if (p.size() != q.size()) throw std::invalid_argument("position length mismatch");
    double total = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == q[i]) continue;
        total += (p[i] == 0 || q[i] == 0) ? 1 : 2;
    }
    return total;
}

Cnf parse_cnf(const std::string& text) {
    Cnf f;
    std::vector<std::string> clauses;
    std::string cur;
    for (char c : text + "&") {
        if (c == '&') {
            clauses.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    for (const auto& cl : clauses) {
        std::vector<int> lits;
        std::string tok;
        for (char c : cl + "|") {
            if (c == '|' || c == ',') {
                size_t i = 0;
                while (i < tok.size() && std::isspace((unsigned char)tok[i])) ++i;
                size_t j = tok.size();
                while (j > i && std::isspace((unsigned char)tok[j - 1])) --j;
                std::string t = tok.substr(i, j - i);
                tok.clear();
                if (t.empty()) continue;
                int sign = 1;
                size_t p = 0;
                if (t[p] == '-' || t[p] == '!') {
                    sign = -1;
                    ++p;
                }
                if (p < t.size() && (t[p] == 'x' || t[p] == 'X')) ++p;
                if (p >= t.size()) throw std::invalid_argument("bad literal: " + t);
                int var = 0;
                for (; p < t.size(); ++p) {
                    if (!std::isdigit((unsigned char)t[p]))
                        throw std::invalid_argument("bad literal: " + t);
                    var = var * 10 + (t[p] - '0');
                }
                if (var == 0) throw std::invalid_argument("variables are 1-based");
                lits.push_back(sign * var);
                f.vars = std::max(f.vars, var);
            } else {
                tok += c;
            }
        }
        if (!lits.empty()) {
            if (lits.size() > 3) throw std::invalid_argument("clause has > 3 literals");
            f.clauses.push_back(lits);
        }
    }
    if (f.clauses.empty()) throw std::invalid_argument("empty formula");
    return f;
}

bool cnf_satisfiable(const Cnf& f) {
    if (f.vars > 30) throw std::invalid_argument("too many variables for brute force");
    for (uint32_t mask = 0; mask < (uint32_t{1} << f.vars); ++mask) {
        bool ok = true;
        for (const auto& cl : f.clauses) {
            bool hit = false;
            for (int lit : cl) {
                bool val = (mask >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == val) hit = true;
            }
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

namespace {

unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
    unsigned long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("S recurrence overflow");
    return r;
}

unsigned long long checked_add(unsigned long long a, unsigned long long b) {
    unsigned long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("S recurrence overflow");
    return r;
}

unsigned long long binomial(unsigned long long n, unsigned long long k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long r = 1;
    for (unsigned long long i = 1; i <= k; ++i) {
        // multiply first, divide after: r * (n-k+i) is always divisible by i
        r = checked_mul(r, n - k + i) / i;
    }
    return r;
}

constexpr unsigned long long kSaturated = std::numeric_limits<unsigned long long>::max();

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    unsigned long long r;
    if (__builtin_mul_overflow(a, b, &r)) return kSaturated;
    return r;
}

unsigned long long sat_add(unsigned long long a, unsigned long long b) {
    unsigned long long r;
    if (__builtin_add_overflow(a, b, &r)) return kSaturated;
    return r;
}

unsigned long long sat_pow(unsigned long long b, unsigned long long e) {
    unsigned long long r = 1;
    for (unsigned long long i = 0; i < e; ++i) r = sat_mul(r, b);
    return r;
}

}  // namespace

std::vector<unsigned long long> compute_S(int L) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    std::vector<unsigned long long> S{2};
    while ((int)S.size() < L) {
        size_t l = S.size();  // computing S_{l+1} from S_1..S_l
        unsigned long long prod = 1;
        for (size_t i = 0; i + 1 < l; ++i) prod = checked_mul(prod, binomial(S[i + 1], S[i]));
        S.push_back(checked_add(checked_mul(checked_mul(S[l - 1] - 1, 2), prod), 1));
    }
    return S;
}

unsigned long long hardness_vertex_count(int L, int vars, int clauses) {
    auto S = compute_S(L);
    // N_0 = 1; N_h = (vars+1)*P_h + (#Psi' choices)*(vars^u + clauses^u)*N_{h-1}
    unsigned long long count = 1;
    for (int h = 1; h <= L; ++h) {
        unsigned long long ph = 1;
        for (int i = 0; i < h; ++i) ph = sat_mul(ph, S[i]);
        unsigned long long local = sat_mul((unsigned long long)vars + 1, ph);
        unsigned long long choices = 1;
        for (int g = 0; g + 1 < h; ++g) choices = sat_mul(choices, binomial(S[g + 1], S[g]));
        unsigned long long u = ph / S[h - 1];  // P_{h-1}
        unsigned long long copies =
            sat_mul(choices, sat_add(sat_pow(vars, u), sat_pow(clauses, u)));
        count = sat_add(local, sat_mul(copies, count));
    }
    return count;
}

namespace {

// all tuples from the given digit sets, lexicographic
std::vector<std::vector<int>> cartesian(const std::vector<std::vector<int>>& sets) {
    std::vector<std::vector<int>> out{{}};
    for (const auto& s : sets) {
        std::vector<std::vector<int>> next;
        for (const auto& pre : out)
            for (int v : s) {
                auto t = pre;
                t.push_back(v);
                next.push_back(t);
            }
        out = std::move(next);
    }
    return out;
}

// all size-r sorted subsets of the sorted set s
std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& s, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
        if ((int)pick.size() == r) {
            out.push_back(pick);
            return;
        }
        for (int i = from; i <= (int)s.size() - (r - (int)pick.size()); ++i) {
            pick.push_back(s[i]);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

struct HardnessBuilder {
    const Cnf& f;
    int L;
    std::vector<unsigned long long> S;
    std::vector<LayeredPosition> pos;
    std::vector<std::pair<int, int>> edges;

    int add(LayeredPosition p) {
        pos.push_back(std::move(p));
        return (int)pos.size() - 1;
    }

    void edge(int a, int b) { edges.push_back({a, b}); }

    // Returns the gadget's port vertices keyed by their remaining
    // coordinate tuple.
    std::map<std::vector<int>, int> build(const std::vector<int>& pi,
                                          const std::vector<std::vector<int>>& psi) {
        int l = (int)pi.size();
        if (l == L) return {{{}, add(pi)}};

        int t = psi[0][0], fv = psi[0][1];
        std::vector<std::vector<int>> tail(psi.begin() + 1, psi.end());
        auto eps_list = cartesian(tail);

        std::map<std::vector<int>, int> ports;
        std::map<std::vector<int>, std::vector<int>> xs, xbars;
        for (const auto& eps : eps_list) {
            auto at = [&](int c) {
                auto p = pi;
                p.push_back(c);
                p.insert(p.end(), eps.begin(), eps.end());
                return p;
            };
            int tv = add(at(t)), fvv = add(at(fv));
            auto tkey = eps, fkey = eps;
            tkey.insert(tkey.begin(), t);
            fkey.insert(fkey.begin(), fv);
            ports[tkey] = tv;
            ports[fkey] = fvv;
            for (int i = 0; i < f.vars; ++i) {
                int x = add(at(0)), xb = add(at(0));
                edge(x, tv);
                edge(x, fvv);
                edge(xb, tv);
                edge(xb, fvv);
                xs[eps].push_back(x);
                xbars[eps].push_back(xb);
            }
        }

        // candidate index-set tuples for the next level
        std::vector<std::vector<std::vector<int>>> choice_sets;
        for (size_t g = 0; g + 1 < psi.size(); ++g)
            choice_sets.push_back(subsets_of_size(psi[g + 1], (int)S[g]));
        std::vector<std::vector<std::vector<int>>> all_psi{{}};
        for (const auto& cs : choice_sets) {
            std::vector<std::vector<std::vector<int>>> next;
            for (const auto& pre : all_psi)
                for (const auto& c : cs) {
                    auto t2 = pre;
                    t2.push_back(c);
                    next.push_back(t2);
                }
            all_psi = std::move(next);
        }

        for (const auto& psi2 : all_psi) {
            auto epsp = cartesian(psi2);
            int u = (int)epsp.size();
            auto pit = pi, pif = pi;
            pit.push_back(t);
            pif.push_back(fv);
            // clause-checking copies attach to the t side
            std::vector<int> js(u, 0);
            while (true) {
                auto sub = build(pit, psi2);
                for (int w = 0; w < u; ++w) {
                    int q = sub.at(epsp[w]);
                    for (int lit : f.clauses[js[w]])
                        edge(q, lit > 0 ? xs[epsp[w]][lit - 1] : xbars[epsp[w]][-lit - 1]);
                }
                int c = u - 1;
                while (c >= 0 && ++js[c] == (int)f.clauses.size()) js[c--] = 0;
                if (c < 0) break;
            }
            // variable-consistency copies attach to the f side
            std::vector<int> is(u, 0);
            while (true) {
                auto sub = build(pif, psi2);
                for (int w = 0; w < u; ++w) {
                    int q = sub.at(epsp[w]);
                    edge(q, xs[epsp[w]][is[w]]);
                    edge(q, xbars[epsp[w]][is[w]]);
                }
                int c = u - 1;
                while (c >= 0 && ++is[c] == f.vars) is[c--] = 0;
                if (c < 0) break;
            }
        }
        return ports;
    }
};

}  // namespace

HardnessInstance gen_hardness(const HardnessParams& params) {
    if (params.L < 1) throw std::invalid_argument("L must be >= 1");
    if (params.formula.clauses.empty()) throw std::invalid_argument("empty formula");
    unsigned long long est = hardness_vertex_count(params.L, params.formula.vars,
                                                   (int)params.formula.clauses.size());
    if (est > params.max_vertices)
        throw std::runtime_error("hardness instance would have " +
                                 (est == kSaturated ? std::string(">= 2^64")
                                                    : std::to_string(est)) +
                                 " vertices, budget is " +
                                 std::to_string(params.max_vertices));

    HardnessBuilder b{params.formula, params.L, compute_S(params.L), {}, {}};
    std::vector<std::vector<int>> full;
    for (int i = 0; i < params.L; ++i) {
        std::vector<int> range;
        for (int v = 1; v <= (int)b.S[i]; ++v) range.push_back(v);
        full.push_back(range);
    }
    auto ports = b.build({}, full);

    int n = (int)b.pos.size();
    std::vector<std::vector<double>> metric(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) metric[i][j] = layered_distance(b.pos[i], b.pos[j]);
    std::vector<int> centers;
    for (auto& [eps, id] : ports) centers.push_back(id);
    Instance inst(n, std::move(b.edges), std::move(metric), (int)centers.size());
    return {std::move(inst), std::move(centers), std::move(b.pos)};
}

Reduction assignment_to_free_reduction(const Instance& inst,
                                       const std::vector<int>& centers) {
    int k = (int)centers.size();
    std::set<int> cset(centers.begin(), centers.end());
    if ((int)cset.size() != k) throw std::invalid_argument("duplicate centers");
    std::vector<int> noncenters;
    std::vector<int> slot(inst.n(), -1);
    for (int v = 0; v < inst.n(); ++v)
        if (!cset.count(v)) {
            slot[v] = (int)noncenters.size();
            noncenters.push_back(v);
        }
    int nf = (int)noncenters.size(), copies = k + 1;
    int nn = copies * nf + k;
    auto copy_id = [&](int v, int j) { return j * nf + slot[v]; };
    std::vector<int> center_id(k);
    for (int i = 0; i < k; ++i) center_id[i] = copies * nf + i;

    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : inst.edges()) {
        bool cu = cset.count(u), cv = cset.count(v);
        if (cu && cv) continue;  // centers are assigned to themselves anyway
        for (int j = 0; j < copies; ++j) {
            int a = cu ? center_id[(int)(std::find(centers.begin(), centers.end(), u) -
                                         centers.begin())]
                       : copy_id(u, j);
            int b = cv ? center_id[(int)(std::find(centers.begin(), centers.end(), v) -
                                         centers.begin())]
                       : copy_id(v, j);
            edges.push_back({a, b});
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto orig_of = [&](int id) {
        return id >= copies * nf ? centers[id - copies * nf] : noncenters[id % nf];
    };
    std::vector<std::vector<double>> metric(nn, std::vector<double>(nn));
    for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b) metric[a][b] = inst.d(orig_of(a), orig_of(b));

    Instance reduced(nn, std::move(edges), std::move(metric), k);
    return {std::move(reduced), centers, std::move(noncenters), copies};
}

ClusteringSolution map_back_assignment(const Instance& inst, const Reduction& red,
                                       const ClusteringSolution& free_sol) {
    int k = (int)red.centers.size(), nf = (int)red.noncenters.size();
    int base = red.copies * nf;

    std::vector<char> layer_hit(red.copies, 0);
    for (int c : free_sol.centers)
        if (c < base) layer_hit[c / nf] = 1;
    int jstar = -1;
    for (int j = 0; j < red.copies; ++j)
        if (!layer_hit[j]) jstar = j;
    if (jstar == -1) throw std::logic_error("no center-free copy layer");

    auto orig_of = [&](int id) {
        return id >= base ? red.centers[id - base] : red.noncenters[id % nf];
    };
    std::vector<int> assign(inst.n(), -1);  // original vertex -> center slot
    for (int i = 0; i < k; ++i) assign[red.centers[i]] = i;

    for (const auto& cluster : free_sol.clusters) {
        // trace on the chosen layer plus the centers
        std::vector<int> trace;
        for (int v : cluster)
            if (v >= base || v / nf == jstar) trace.push_back(v);
        if (trace.empty()) continue;
        std::set<int> in_trace(trace.begin(), trace.end());
        std::set<int> todo(trace.begin(), trace.end());
        while (!todo.empty()) {
            // one connected component of the trace
            std::vector<int> comp{*todo.begin()};
            todo.erase(todo.begin());
            for (size_t qi = 0; qi < comp.size(); ++qi)
                for (int w : red.reduced.adj()[comp[qi]])
                    if (todo.count(w)) {
                        todo.erase(w);
                        comp.push_back(w);
                    }
            std::vector<int> sources;
            for (int v : comp)
                if (v >= base) sources.push_back(v - base);
            if (sources.empty())
                throw std::logic_error("trace component contains no fixed center");
            // multi-source shortest paths inside the component; ties go to
            // the smaller center slot
            std::map<int, double> dist;
            std::map<int, int> who;
            for (int v : comp) dist[v] = std::numeric_limits<double>::infinity();
            std::sort(sources.begin(), sources.end());
            for (int s : sources) {
                int id = base + s;
                if (dist[id] > 0) {
                    dist[id] = 0;
                    who[id] = s;
                }
            }
            std::set<int> done;
            while ((int)done.size() < (int)comp.size()) {
                int pick = -1;
                for (int v : comp)
                    if (!done.count(v) && (pick == -1 || dist[v] < dist[pick])) pick = v;
                if (dist[pick] == std::numeric_limits<double>::infinity()) break;
                done.insert(pick);
                for (int w : red.reduced.adj()[pick]) {
                    if (!dist.count(w) || done.count(w)) continue;
                    double nd = dist[pick] + red.reduced.d(pick, w);
                    if (nd < dist[w] - 1e-12 ||
                        (nd < dist[w] + 1e-12 && who[pick] < who[w])) {
                        dist[w] = nd;
                        who[w] = who[pick];
                    }
                }
            }
            for (int v : comp) {
                int ov = orig_of(v);
                if (assign[ov] == -1) assign[ov] = who[v];
            }
        }
    }
    for (int v = 0; v < inst.n(); ++v)
        if (assign[v] == -1) throw std::logic_error("vertex missed by map-back");

    ClusteringSolution sol;
    sol.clusters.assign(k, {});
    for (int v = 0; v < inst.n(); ++v) sol.clusters[assign[v]].push_back(v);
    sol.centers = red.centers;
    sol.objective = Objective::Center;
    sol.value = evaluate_objective(inst, sol, Objective::Center);
    return sol;
}

namespace {

std::vector<std::vector<double>> random_points(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i) {
        double x = coord(rng), y = coord(rng);
        pts.push_back({x, y});
    }
    return pts;
}

}  // namespace

Instance gen_random_geometric(int n, int k, double radius, uint64_t seed) {
    if (n < 1 || k < 1 || radius <= 0) throw std::invalid_argument("bad parameters");
    std::mt19937_64 rng(seed);
    auto pts = random_points(n, rng);
    auto metric = metric_from_coords(pts, Norm::L2);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (metric[u][v] <= radius) edges.push_back({u, v});
    // connect leftover components through their closest cross pair
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : edges) parent[find(u)] = find(v);
    while (true) {
        int bu = -1, bv = -1;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (find(u) != find(v) && (bu == -1 || metric[u][v] < metric[bu][bv])) {
                    bu = u;
                    bv = v;
                }
        if (bu == -1) break;
        edges.push_back({bu, bv});
        parent[find(bu)] = find(bv);
    }
    std::sort(edges.begin(), edges.end());
    return Instance(n, std::move(edges), std::move(metric), k);
}

Instance gen_random_tree(int n, int k, uint64_t seed) {
    if (n < 1 || k < 1) throw std::invalid_argument("bad parameters");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.push_back({pick(rng), v});
    }
    auto pts = random_points(n, rng);
    return Instance(n, std::move(edges), metric_from_coords(pts, Norm::L2), k);
}

KtreeResult gen_partial_ktree(int n, int k, int w, uint64_t seed) {
    if (n < 1 || k < 1 || w < 1) throw std::invalid_argument("bad parameters");
    w = std::min(w, n - 1);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);

    TreeDecomposition td;
    std::vector<int> first_bag;
    for (int v = 0; v <= w; ++v) first_bag.push_back(v);
    td.bags.push_back(first_bag);

    std::set<std::pair<int, int>> kept;
    auto consider = [&](int u, int v, bool backbone) {
        if (u > v) std::swap(u, v);
        if (backbone || coin(rng) == 0) kept.insert({u, v});
    };
    for (int u = 0; u <= w; ++u)
        for (int v = u + 1; v <= w; ++v) consider(u, v, v == u + 1);

    for (int v = w + 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick_bag(0, (int)td.bags.size() - 1);
        int b = pick_bag(rng);
        auto clique = td.bags[b];
        std::uniform_int_distribution<int> drop(0, (int)clique.size() - 1);
        clique.erase(clique.begin() + drop(rng));
        for (size_t i = 0; i < clique.size(); ++i) consider(clique[i], v, i == 0);
        clique.push_back(v);
        std::sort(clique.begin(), clique.end());
        td.bags.push_back(clique);
        td.tree_edges.push_back({b, (int)td.bags.size() - 1});
    }

    auto pts = random_points(n, rng);
    std::vector<std::pair<int, int>> edges(kept.begin(), kept.end());
    Instance inst(n, std::move(edges), metric_from_coords(pts, Norm::L2), k);
    return {std::move(inst), std::move(td)};
}

}  // namespace conclust

#include "conclust/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace conclust {

Rgs canonicalize_rgs(const std::vector<int>& labels) {
    Rgs out(labels.size());
    std::vector<int> remap;
    for (size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find(remap.begin(), remap.end(), labels[i]);
        int lab;
        if (it == remap.end()) {
            lab = (int)remap.size();
            remap.push_back(labels[i]);
        } else {
            lab = (int)(it - remap.begin());
        }
        out[i] = (uint8_t)lab;
    }
    return out;
}

int block_count(const Rgs& p) {
    int m = 0;
    for (uint8_t c : p) m = std::max(m, (int)c + 1);
    return m;
}

Rgs join_partitions(const Rgs& a, const Rgs& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ground-set mismatch");
    int n = (int)a.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
    // union positions that share a block in either partition
    std::vector<int> first(2 * n, -1);
    for (int i = 0; i < n; ++i) {
        if (first[a[i]] == -1) first[a[i]] = i; else unite(i, first[a[i]]);
        if (first[n + b[i]] == -1) first[n + b[i]] = i; else unite(i, first[n + b[i]]);
    }
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = find(i);
    return canonicalize_rgs(labels);
}

std::vector<Rgs> enumerate_partitions(int size) {
    std::vector<Rgs> out;
    Rgs cur(size);
    std::function<void(int, int)> rec = [&](int pos, int max_label) {
        if (pos == size) {
            out.push_back(cur);
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            cur[pos] = (uint8_t)l;
            rec(pos + 1, std::max(max_label, l));
        }
    };
    rec(0, -1);
    return out;
}

Rgs rgs_insert_singleton(const Rgs& p, int pos) {
    std::vector<int> labels;
    labels.reserve(p.size() + 1);
    int fresh = block_count(p);
    for (int i = 0; i < (int)p.size() + 1; ++i) {
        if (i == pos)
            labels.push_back(fresh);
        else
            labels.push_back(p[i < pos ? i : i - 1]);
    }
    return canonicalize_rgs(labels);
}

Rgs rgs_remove(const Rgs& p, int pos) {
    std::vector<int> labels;
    labels.reserve(p.size() - 1);
    for (int i = 0; i < (int)p.size(); ++i)
        if (i != pos) labels.push_back(p[i]);
    return canonicalize_rgs(labels);
}

Rgs rgs_merge_blocks(const Rgs& p, int pos_a, int pos_b) {
    int la = p[pos_a], lb = p[pos_b];
    std::vector<int> labels(p.begin(), p.end());
    for (auto& l : labels)
        if (l == lb) l = la;
    return canonicalize_rgs(labels);
}

}  // namespace conclust

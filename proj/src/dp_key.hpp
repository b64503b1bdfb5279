#pragma once

#include <cstdint>
#include <vector>

#include "conclust/partition.hpp"

namespace conclust::detail {

/// Specification key: per-bag-position target plus canonical partition.
/// `budget` carries the allowed finished-cluster count in budgeted DPs
/// and stays 0 otherwise.
struct DpKey {
    std::vector<int> assign;
    Rgs part;
    int budget = 0;

    bool operator==(const DpKey& o) const {
        return budget == o.budget && assign == o.assign && part == o.part;
    }
};

struct DpKeyHash {
    size_t operator()(const DpKey& k) const {
        size_t h = 1469598103934665603ull;
        auto mix = [&h](uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        mix((uint64_t)k.budget);
        for (int a : k.assign) mix((uint64_t)(uint32_t)a);
        for (uint8_t c : k.part) mix(c);
        return h;
    }
};

inline int bag_position(const std::vector<int>& bag, int v) {
    for (size_t i = 0; i < bag.size(); ++i)
        if (bag[i] == v) return (int)i;
    return -1;
}

template <typename T>
std::vector<T> insert_at(const std::vector<T>& v, int pos, T x) {
    std::vector<T> out(v.begin(), v.begin() + pos);
    out.push_back(x);
    out.insert(out.end(), v.begin() + pos, v.end());
    return out;
}

template <typename T>
std::vector<T> remove_at(const std::vector<T>& v, int pos) {
    std::vector<T> out(v.begin(), v.begin() + pos);
    out.insert(out.end(), v.begin() + pos + 1, v.end());
    return out;
}

}  // namespace conclust::detail

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace conclust {

/// Set partition of an ordered ground set, encoded as a canonical
/// restricted growth string: label[i] is the block of position i, labels
/// appear in first-occurrence order starting at 0.
using Rgs = std::vector<uint8_t>;

/// Relabels an arbitrary block labeling into the canonical encoding.
Rgs canonicalize_rgs(const std::vector<int>& labels);

int block_count(const Rgs& p);

/// Finest common coarsening (the join U1 ⊔ U2): blocks sharing an element
/// are merged transitively. Both partitions must cover the same ground set.
Rgs join_partitions(const Rgs& a, const Rgs& b);

/// All canonical partitions of a ground set of the given size
/// (Bell(size) many; size 0 yields the single empty partition).
std::vector<Rgs> enumerate_partitions(int size);

/// Partition edits used by the DP transitions. Positions refer to the
/// sorted bag order.
Rgs rgs_insert_singleton(const Rgs& p, int pos);
Rgs rgs_remove(const Rgs& p, int pos);
Rgs rgs_merge_blocks(const Rgs& p, int pos_a, int pos_b);

struct RgsHash {
    size_t operator()(const Rgs& p) const {
        size_t h = 1469598103934665603ull;
        for (uint8_t c : p) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace conclust

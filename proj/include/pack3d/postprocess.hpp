#pragma once

#include <vector>

#include "pack3d/geometry.hpp"

namespace pack3d {

struct PostConfig {
    double tau_compaction = 0.75;
    double tau_validation = 0.5;
    std::vector<int> step_sizes = {25, 10, 5, 1};
    int fallback_grid_step = 50;
    int refinement_rounds = 2;
};

struct PostStats {
    int moves_accepted = 0;
    int recovered = 0;
    int removed = 0;
};

// Directional compaction: per layer, in ascending x+y order, items shift
// toward the origin through (-s,0), (0,-s), (-s,-s) moves that keep
// containment, non-overlap, and the support threshold. The total x+y offset
// never increases, and a second application is a fixed point.
std::vector<PackedItem> compact_layers(std::vector<PackedItem> items,
                                       const Pallet& pallet, const PostConfig& config,
                                       PostStats* stats = nullptr);

struct FallbackResult {
    std::vector<PackedItem> placed;
    std::vector<Item> still_unplaced;
};

// Grid search recovering unplaced items, ranked lexicographically by (z,
// x+y); the grid step halves on total failure for up to refinement_rounds
// extra rounds.
FallbackResult fallback_place(std::vector<Item> unplaced,
                              std::vector<PackedItem> placed, const Pallet& pallet,
                              const PostConfig& config, PostStats* stats = nullptr);

struct ValidateResult {
    std::vector<PackedItem> kept;
    std::vector<Item> removed;
};

// Final feasibility pass: items are kept, in ascending (z, x+y, id) order,
// only when containment, non-overlap against kept items, the support
// threshold, and the payload budget all hold.
ValidateResult validate(std::vector<PackedItem> items, const Pallet& pallet,
                        const PostConfig& config, PostStats* stats = nullptr);

}  // namespace pack3d

#pragma once

#include <span>
#include <vector>

#include "pack3d/geometry.hpp"

namespace pack3d {

enum class SuperKind { Single, Horizontal, Vertical };

struct SuperMember {
    Item item;
    int dx = 0, dy = 0, dz = 0;  // offsets within the bounding box
    Rotation rot = Rotation::Deg0;
};

// A pre-grouped block of identical or footprint-compatible items treated as a
// single placement unit by the constructive phase and the GA.
struct SuperItem {
    SuperKind kind = SuperKind::Single;
    std::vector<SuperMember> members;
    int length_mm = 0;
    int width_mm = 0;
    int height_mm = 0;
    std::int64_t mass_g = 0;

    std::int64_t bounding_volume_mm3() const {
        return static_cast<std::int64_t>(length_mm) * width_mm * height_mm;
    }
    std::int64_t item_volume_mm3() const {
        std::int64_t v = 0;
        for (const auto& m : members) v += m.item.volume_mm3();
        return v;
    }
    std::int64_t footprint_area_mm2() const {
        return static_cast<std::int64_t>(length_mm) * width_mm;
    }
};

struct SuperConfig {
    int max_super_height_mm = 0;  // 0 means pallet H / 3
    bool enable_horizontal = true;
    bool enable_vertical = true;
};

// Groups every input item into exactly one superitem. Column-like items
// (height-to-base ratio > 1) with identical footprints stack vertically up to
// the height cap; flat identical items merge into 2x1 or 2x2 horizontal
// blocks; everything else stays a Single.
std::vector<SuperItem> build_superitems(std::span<const Item> items,
                                        const Pallet& pallet,
                                        const SuperConfig& config = {});

// Member placements relative to the given base placement; rotating the
// superitem transposes member offsets and toggles member rotations.
std::vector<PackedItem> decompose(const SuperItem& super, const Placement& base);

}  // namespace pack3d

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pack3d/geometry.hpp"
#include "pack3d/superitems.hpp"

namespace pack3d {

struct FreeRect {
    int x = 0, y = 0, len = 0, wid = 0;
};

struct Spot {
    int x = 0, y = 0;
    Rotation rot = Rotation::Deg0;
};

// Maximal free rectangles over the pallet base, with Best-Short-Side-Fit
// scoring tie-broken by smaller y then smaller x.
class FreeRectStore {
public:
    FreeRectStore(int base_len, int base_wid);

    // Finds the best position over both rotations and commits it, splitting
    // and pruning the affected free rectangles. Returns nothing when the
    // footprint fits nowhere.
    std::optional<Spot> insert(int len, int wid, bool allow_rotation = true);

    const std::vector<FreeRect>& rects() const { return rects_; }

private:
    void place(int x, int y, int len, int wid);
    std::vector<FreeRect> rects_;
};

struct LayerMember {
    int unit = 0;  // index into the superitem list the layer was built from
    int x = 0, y = 0;
    Rotation rot = Rotation::Deg0;
};

struct Layer {
    int base_z = 0;
    int height = 0;  // max member height
    std::vector<LayerMember> members;
};

struct BaseSolution {
    std::vector<Layer> layers;
    std::vector<PackedItem> placed;
    std::vector<int> residual;  // superitem indices left for the GA
    int top_z = 0;
    std::int64_t placed_mass_g = 0;
};

struct ConstructiveConfig {
    double layer_height_tolerance = 1.25;
};

// Greedy layer construction: superitems sorted by footprint area descending
// seed successive MaxRects layers; construction stops when the next layer
// seed no longer fits under H, leaving the rest as residual.
BaseSolution build_base_solution(std::span<const SuperItem> superitems,
                                 const Pallet& pallet,
                                 const ConstructiveConfig& config = {});

struct Footprint {
    int len = 0, wid = 0;
};

struct Placed2D {
    int index = 0;
    int x = 0, y = 0;
    Rotation rot = Rotation::Deg0;
};

// Deterministic 2D placement of footprints in input order; footprints that
// fit nowhere are skipped.
std::vector<Placed2D> bottom_left_place(std::span<const Footprint> footprints,
                                        int base_len, int base_wid);
std::vector<Placed2D> extreme_point_place(std::span<const Footprint> footprints,
                                          int base_len, int base_wid);

}  // namespace pack3d

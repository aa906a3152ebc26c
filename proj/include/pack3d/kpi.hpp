#pragma once

#include <array>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "pack3d/geometry.hpp"

namespace pack3d {

struct KpiWeights {
    // Order: coverage, abs_den, rel_den, side_sup, surf_sup, tall_item, cog2d.
    std::array<double, 7> alpha{};

    static KpiWeights uniform();
    bool valid() const;  // non-negative, sum to one within 1e-9
};

struct KpiVector {
    double coverage = 0.0;
    double abs_den = 0.0;
    double rel_den = 0.0;
    double side_sup = 0.0;
    double surf_sup = 0.0;
    double tall_item = 0.0;
    double cog2d = 0.0;
};

struct KpiParams {
    double tau_side = 0.2;
    double tau_surface = 0.75;
    int voxel_grid = 20;
};

// Occupancy over a fixed n x n x n lattice discretizing (L, W, H*). A cell is
// occupied iff some item box covers its center point.
class VoxelGrid {
public:
    VoxelGrid(std::span<const PackedItem> items, const Pallet& pallet,
              int used_height_mm, int n);

    int size() const { return n_; }
    bool occupied(int ix, int iy, int iz) const {
        return cells_[static_cast<std::size_t>((ix * n_ + iy) * n_ + iz)];
    }
    bool empty_extent() const { return empty_extent_; }

private:
    int n_;
    bool empty_extent_;
    std::vector<char> cells_;
};

// Share of unique residual item ids placed; 1.0 when the residual set is empty.
double coverage(const std::unordered_set<std::string>& placed_ids,
                const std::unordered_set<std::string>& residual_ids);

// Total item volume over L*W*H*; 0.0 for an empty packing.
double abs_density(std::span<const PackedItem> items, const Pallet& pallet);

// Occupied fraction of the voxels strictly below the per-column upper
// envelope; 1.0 when no voxel lies below any envelope.
double rel_density(std::span<const PackedItem> items, const Pallet& pallet,
                   int voxel_grid = 20);

// Average over items of the supported-face rate across non-boundary vertical
// faces; items whose faces are all boundary faces contribute 1.0.
double side_support(std::span<const PackedItem> items, const Pallet& pallet,
                    double tau_side = 0.2);

// Fraction of non-ground items whose base support ratio exceeds tau_surface;
// 1.0 when everything rests on the ground.
double surf_support(std::span<const PackedItem> items, double tau_surface = 0.75);

// Penalty score for tall slender items placed off-center or high up.
double tall_item_score(std::span<const PackedItem> items, const Pallet& pallet);

// Planar balance from the mass-weighted centroid offset; falls back to volume
// weighting when the total mass is zero.
double cog2d(std::span<const PackedItem> items, const Pallet& pallet);

// Spatial balance: centroid offset from the pallet-base center normalized by
// the diagonal sqrt(d_max^2 + H*^2).
double cog3d(std::span<const PackedItem> items, const Pallet& pallet);

KpiVector evaluate_kpis(std::span<const PackedItem> items, const Pallet& pallet,
                        const std::unordered_set<std::string>& placed_ids,
                        const std::unordered_set<std::string>& residual_ids,
                        const KpiParams& params = {});

// Scalarized fitness: sum of weighted KPIs minus min(1, overlap fraction),
// clipped below at 1e-6. Throws std::invalid_argument on invalid weights.
double fitness(const KpiVector& kpis, double overlap, const KpiWeights& weights);

inline constexpr double kFitnessFloor = 1e-6;

struct KpiReport {
    std::string order_id;
    int n_items = 0;
    int n_placed = 0;
    double abs_den = 0.0;
    double rel_den = 0.0;
    double hw_ratio = 0.0;
    double side_sup = 0.0;
    double surf_sup = 0.0;
    double cog2d = 0.0;
    double cog3d = 0.0;
    double corrected_eff = 0.0;
    double runtime_s = 0.0;
};

// Evaluation-only metric set; every KPI is scaled by the corrected packing
// efficiency valid_items / total_items.
KpiReport eval_metrics(std::span<const PackedItem> placed, const Pallet& pallet,
                       int total_items, double runtime_s,
                       const KpiParams& params = {});

}  // namespace pack3d

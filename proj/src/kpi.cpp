#include "pack3d/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pack3d {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

KpiWeights KpiWeights::uniform() {
    KpiWeights w;
    w.alpha.fill(1.0 / 7.0);
    return w;
}

bool KpiWeights::valid() const {
    double sum = 0.0;
    for (double a : alpha) {
        if (a < 0.0) return false;
        sum += a;
    }
    return std::abs(sum - 1.0) <= 1e-9;
}

VoxelGrid::VoxelGrid(std::span<const PackedItem> items, const Pallet& pallet,
                     int used_height_mm, int n)
    : n_(n), empty_extent_(used_height_mm <= 0) {
    cells_.assign(static_cast<std::size_t>(n) * n * n, 0);
    if (empty_extent_) return;
    const double rx = static_cast<double>(pallet.length_mm) / n;
    const double ry = static_cast<double>(pallet.width_mm) / n;
    const double rz = static_cast<double>(used_height_mm) / n;
    for (const auto& p : items) {
        // Cell (i,j,k) is occupied iff the box covers the cell center
        // ((i+0.5)rx, (j+0.5)ry, (k+0.5)rz).
        const auto lo = [](double coord, double res) {
            return std::max(0, static_cast<int>(std::ceil(coord / res - 0.5)));
        };
        const auto hi = [this](double coord, double res) {
            return std::min(n_ - 1, static_cast<int>(std::floor(coord / res - 0.5 - 1e-12)));
        };
        const int ix0 = lo(p.x0(), rx), ix1 = hi(p.x1(), rx);
        const int iy0 = lo(p.y0(), ry), iy1 = hi(p.y1(), ry);
        const int iz0 = lo(p.z0(), rz), iz1 = hi(p.z1(), rz);
        for (int ix = ix0; ix <= ix1; ++ix)
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int iz = iz0; iz <= iz1; ++iz)
                    cells_[static_cast<std::size_t>((ix * n_ + iy) * n_ + iz)] = 1;
    }
}

double coverage(const std::unordered_set<std::string>& placed_ids,
                const std::unordered_set<std::string>& residual_ids) {
    if (residual_ids.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& id : residual_ids) hit += placed_ids.count(id);
    return static_cast<double>(hit) / static_cast<double>(residual_ids.size());
}

double abs_density(std::span<const PackedItem> items, const Pallet& pallet) {
    const int hstar = used_height(items);
    if (hstar <= 0) return 0.0;
    std::int64_t vol = 0;
    for (const auto& p : items) vol += p.item.volume_mm3();
    const double denom = static_cast<double>(pallet.length_mm) * pallet.width_mm * hstar;
    return clamp01(static_cast<double>(vol) / denom);
}

double rel_density(std::span<const PackedItem> items, const Pallet& pallet,
                   int voxel_grid) {
    const int hstar = used_height(items);
    const VoxelGrid grid(items, pallet, hstar, voxel_grid);
    if (grid.empty_extent()) return 1.0;
    const int n = grid.size();
    std::int64_t below = 0, occupied_below = 0;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            int h_upp = -1;  // topmost occupied voxel index; empty columns have none
            for (int iz = n - 1; iz >= 0; --iz) {
                if (grid.occupied(ix, iy, iz)) { h_upp = iz; break; }
            }
            for (int iz = 0; iz < h_upp; ++iz) {
                ++below;
                if (grid.occupied(ix, iy, iz)) ++occupied_below;
            }
        }
    }
    if (below == 0) return 1.0;
    return static_cast<double>(occupied_below) / static_cast<double>(below);
}

double side_support(std::span<const PackedItem> items, const Pallet& pallet,
                    double tau_side) {
    if (items.empty()) return 1.0;
    constexpr Face kFaces[] = {Face::PosX, Face::NegX, Face::PosY, Face::NegY};
    double total = 0.0;
    for (const auto& p : items) {
        int faces = 0, supported = 0;
        for (Face f : kFaces) {
            if (is_boundary_face(p, f, pallet)) continue;
            ++faces;
            if (side_contact_fraction(p, f, items) >= tau_side) ++supported;
        }
        total += (faces == 0) ? 1.0
                              : static_cast<double>(supported) / static_cast<double>(faces);
    }
    return clamp01(total / static_cast<double>(items.size()));
}

double surf_support(std::span<const PackedItem> items, double tau_surface) {
    int stacked = 0, supported = 0;
    for (const auto& p : items) {
        if (p.z0() <= 0) continue;
        ++stacked;
        if (base_support_ratio(p, items) > tau_surface) ++supported;
    }
    if (stacked == 0) return 1.0;
    return static_cast<double>(supported) / static_cast<double>(stacked);
}

double tall_item_score(std::span<const PackedItem> items, const Pallet& pallet) {
    const int hstar = used_height(items);
    const double dmax = std::hypot(pallet.length_mm / 2.0, pallet.width_mm / 2.0);
    double penalty_sum = 0.0;
    int tall = 0;
    for (const auto& p : items) {
        const Dims d = p.dims();
        const double base = std::sqrt(static_cast<double>(d.len) * d.wid);
        if (base <= 0.0) continue;
        const double r = d.hgt / base;
        if (r <= 1.0) continue;
        ++tall;
        const double cx = p.x0() + d.len / 2.0;
        const double cy = p.y0() + d.wid / 2.0;
        const double dist = std::hypot(cx - pallet.length_mm / 2.0,
                                       cy - pallet.width_mm / 2.0);
        const double elevation = hstar > 0 ? static_cast<double>(p.z0()) / hstar : 0.0;
        penalty_sum += r * (0.7 * (dmax > 0 ? dist / dmax : 0.0) + 0.3 * elevation);
    }
    if (tall == 0) return 1.0;
    return clamp01(1.0 - penalty_sum / tall);
}

namespace {

// Mass-weighted centroid of item centers; volume-weighted when massless.
bool centroid(std::span<const PackedItem> items, double& x, double& y, double& z) {
    double wsum = 0.0, xs = 0.0, ys = 0.0, zs = 0.0;
    std::int64_t mass = 0;
    for (const auto& p : items) mass += p.item.mass_g;
    for (const auto& p : items) {
        const Dims d = p.dims();
        const double w = mass > 0 ? static_cast<double>(p.item.mass_g)
                                  : static_cast<double>(p.item.volume_mm3());
        wsum += w;
        xs += w * (p.x0() + d.len / 2.0);
        ys += w * (p.y0() + d.wid / 2.0);
        zs += w * (p.z0() + d.hgt / 2.0);
    }
    if (wsum <= 0.0) return false;
    x = xs / wsum;
    y = ys / wsum;
    z = zs / wsum;
    return true;
}

}  // namespace

double cog2d(std::span<const PackedItem> items, const Pallet& pallet) {
    double x, y, z;
    if (!centroid(items, x, y, z)) return 1.0;
    const double dmax = std::hypot(pallet.length_mm / 2.0, pallet.width_mm / 2.0);
    if (dmax <= 0.0) return 1.0;
    const double delta =
        std::hypot(x - pallet.length_mm / 2.0, y - pallet.width_mm / 2.0) / dmax;
    return clamp01(1.0 - delta);
}

double cog3d(std::span<const PackedItem> items, const Pallet& pallet) {
    double x, y, z;
    if (!centroid(items, x, y, z)) return 1.0;
    const int hstar = used_height(items);
    const double dmax = std::hypot(pallet.length_mm / 2.0, pallet.width_mm / 2.0);
    const double diag = std::sqrt(dmax * dmax + static_cast<double>(hstar) * hstar);
    if (diag <= 0.0) return 1.0;
    const double off = std::sqrt(std::pow(x - pallet.length_mm / 2.0, 2) +
                                 std::pow(y - pallet.width_mm / 2.0, 2) + z * z);
    return clamp01(1.0 - off / diag);
}

KpiVector evaluate_kpis(std::span<const PackedItem> items, const Pallet& pallet,
                        const std::unordered_set<std::string>& placed_ids,
                        const std::unordered_set<std::string>& residual_ids,
                        const KpiParams& params) {
    KpiVector k;
    k.coverage = coverage(placed_ids, residual_ids);
    k.abs_den = abs_density(items, pallet);
    k.rel_den = rel_density(items, pallet, params.voxel_grid);
    k.side_sup = side_support(items, pallet, params.tau_side);
    k.surf_sup = surf_support(items, params.tau_surface);
    k.tall_item = tall_item_score(items, pallet);
    k.cog2d = cog2d(items, pallet);
    return k;
}

double fitness(const KpiVector& k, double overlap, const KpiWeights& w) {
    if (!w.valid()) {
        throw std::invalid_argument("kpi weights must be non-negative and sum to one");
    }
    const double score = w.alpha[0] * k.coverage + w.alpha[1] * k.abs_den +
                         w.alpha[2] * k.rel_den + w.alpha[3] * k.side_sup +
                         w.alpha[4] * k.surf_sup + w.alpha[5] * k.tall_item +
                         w.alpha[6] * k.cog2d - std::min(1.0, overlap);
    return std::max(kFitnessFloor, score);
}

KpiReport eval_metrics(std::span<const PackedItem> placed, const Pallet& pallet,
                       int total_items, double runtime_s, const KpiParams& params) {
    KpiReport r;
    r.n_items = total_items;
    r.n_placed = static_cast<int>(placed.size());
    r.runtime_s = runtime_s;
    const double eff =
        total_items > 0
            ? static_cast<double>(r.n_placed) / static_cast<double>(total_items)
            : 1.0;
    r.corrected_eff = clamp01(eff);

    const int hstar = used_height(placed);
    const double hw = pallet.width_mm > 0
                          ? static_cast<double>(hstar) / pallet.width_mm
                          : 0.0;
    r.abs_den = abs_density(placed, pallet) * r.corrected_eff;
    r.rel_den = rel_density(placed, pallet, params.voxel_grid) * r.corrected_eff;
    r.hw_ratio = clamp01(hw) * r.corrected_eff;
    r.side_sup = side_support(placed, pallet, params.tau_side) * r.corrected_eff;
    r.surf_sup = surf_support(placed, params.tau_surface) * r.corrected_eff;
    r.cog2d = cog2d(placed, pallet) * r.corrected_eff;
    r.cog3d = cog3d(placed, pallet) * r.corrected_eff;
    return r;
}

}  // namespace pack3d

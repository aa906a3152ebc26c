#include "pack3d/constructive.hpp"

#include <algorithm>
#include <limits>

namespace pack3d {

namespace {

bool rects_overlap(int ax, int ay, int al, int aw, int bx, int by, int bl, int bw) {
    return ax < bx + bl && bx < ax + al && ay < by + bw && by < ay + aw;
}

bool rect_contains(const FreeRect& outer, const FreeRect& inner) {
    return inner.x >= outer.x && inner.y >= outer.y &&
           inner.x + inner.len <= outer.x + outer.len &&
           inner.y + inner.wid <= outer.y + outer.wid;
}

}  // namespace

FreeRectStore::FreeRectStore(int base_len, int base_wid) {
    if (base_len > 0 && base_wid > 0) rects_.push_back({0, 0, base_len, base_wid});
}

std::optional<Spot> FreeRectStore::insert(int len, int wid, bool allow_rotation) {
    if (len <= 0 || wid <= 0) return std::nullopt;

    struct Best {
        int short_fit = std::numeric_limits<int>::max();
        int long_fit = std::numeric_limits<int>::max();
        Spot spot;
        bool found = false;
    } best;

    const auto consider = [&](int l, int w, Rotation rot) {
        for (const auto& r : rects_) {
            if (l > r.len || w > r.wid) continue;
            const int leftover_x = r.len - l;
            const int leftover_y = r.wid - w;
            const int short_fit = std::min(leftover_x, leftover_y);
            const int long_fit = std::max(leftover_x, leftover_y);
            const bool better =
                short_fit < best.short_fit ||
                (short_fit == best.short_fit && long_fit < best.long_fit) ||
                (short_fit == best.short_fit && long_fit == best.long_fit &&
                 (r.y < best.spot.y || (r.y == best.spot.y && r.x < best.spot.x)));
            if (!best.found || better) {
                best = {short_fit, long_fit, {r.x, r.y, rot}, true};
            }
        }
    };

    consider(len, wid, Rotation::Deg0);
    if (allow_rotation && len != wid) consider(wid, len, Rotation::Deg90);
    if (!best.found) return std::nullopt;

    const int plen = best.spot.rot == Rotation::Deg0 ? len : wid;
    const int pwid = best.spot.rot == Rotation::Deg0 ? wid : len;
    place(best.spot.x, best.spot.y, plen, pwid);
    return best.spot;
}

void FreeRectStore::place(int x, int y, int len, int wid) {
    std::vector<FreeRect> next;
    next.reserve(rects_.size() + 4);
    for (const auto& r : rects_) {
        if (!rects_overlap(r.x, r.y, r.len, r.wid, x, y, len, wid)) {
            next.push_back(r);
            continue;
        }
        // Split the intersected rectangle into up to four maximal remainders.
        if (x > r.x) next.push_back({r.x, r.y, x - r.x, r.wid});
        if (x + len < r.x + r.len)
            next.push_back({x + len, r.y, r.x + r.len - (x + len), r.wid});
        if (y > r.y) next.push_back({r.x, r.y, r.len, y - r.y});
        if (y + wid < r.y + r.wid)
            next.push_back({r.x, y + wid, r.len, r.y + r.wid - (y + wid)});
    }
    // Prune rectangles fully enclosed by another.
    std::vector<FreeRect> pruned;
    for (std::size_t i = 0; i < next.size(); ++i) {
        bool contained = false;
        for (std::size_t j = 0; j < next.size() && !contained; ++j) {
            if (i == j) continue;
            if (rect_contains(next[j], next[i]) &&
                !(j > i && rect_contains(next[i], next[j]))) {
                contained = true;
            }
        }
        if (!contained) pruned.push_back(next[i]);
    }
    rects_ = std::move(pruned);
}

BaseSolution build_base_solution(std::span<const SuperItem> superitems,
                                 const Pallet& pallet,
                                 const ConstructiveConfig& config) {
    BaseSolution sol;

    std::vector<int> remaining(superitems.size());
    for (std::size_t i = 0; i < superitems.size(); ++i) remaining[i] = static_cast<int>(i);
    std::sort(remaining.begin(), remaining.end(), [&](int a, int b) {
        const auto aa = superitems[a].footprint_area_mm2();
        const auto bb = superitems[b].footprint_area_mm2();
        if (aa != bb) return aa > bb;
        if (superitems[a].height_mm != superitems[b].height_mm)
            return superitems[a].height_mm > superitems[b].height_mm;
        return a < b;
    });

    std::vector<int> permanent_residual;
    int base_z = 0;

    while (!remaining.empty()) {
        const int seed = remaining.front();
        if (base_z + superitems[seed].height_mm > pallet.height_mm) break;

        FreeRectStore store(pallet.length_mm, pallet.width_mm);
        Layer layer;
        layer.base_z = base_z;
        std::vector<char> taken(remaining.size(), 0);

        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const SuperItem& s = superitems[remaining[i]];
            if (sol.placed_mass_g + s.mass_g > pallet.max_payload_g) continue;
            if (base_z + s.height_mm > pallet.height_mm) continue;
            if (layer.height > 0 &&
                s.height_mm > config.layer_height_tolerance * layer.height)
                continue;
            const auto spot = store.insert(s.length_mm, s.width_mm);
            if (!spot) continue;
            layer.members.push_back({remaining[i], spot->x, spot->y, spot->rot});
            layer.height = std::max(layer.height, s.height_mm);
            sol.placed_mass_g += s.mass_g;
            taken[i] = 1;
        }

        if (layer.members.empty()) {
            // The seed can never be placed (oversize footprint or payload).
            permanent_residual.push_back(seed);
            remaining.erase(remaining.begin());
            continue;
        }

        for (const auto& m : layer.members) {
            Placement base{m.x, m.y, layer.base_z, m.rot};
            for (auto& p : decompose(superitems[m.unit], base)) {
                sol.placed.push_back(std::move(p));
            }
        }
        base_z += layer.height;
        sol.layers.push_back(std::move(layer));

        std::vector<int> keep;
        keep.reserve(remaining.size());
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (!taken[i]) keep.push_back(remaining[i]);
        }
        remaining = std::move(keep);
    }

    sol.top_z = base_z;
    sol.residual = std::move(permanent_residual);
    sol.residual.insert(sol.residual.end(), remaining.begin(), remaining.end());
    std::sort(sol.residual.begin(), sol.residual.end());
    return sol;
}

namespace {

struct PlacedRect {
    int x, y, len, wid;
};

bool spot_feasible(int x, int y, int len, int wid, int base_len, int base_wid,
                   const std::vector<PlacedRect>& placed) {
    if (x < 0 || y < 0 || x + len > base_len || y + wid > base_wid) return false;
    for (const auto& p : placed) {
        if (rects_overlap(p.x, p.y, p.len, p.wid, x, y, len, wid)) return false;
    }
    return true;
}

}  // namespace

std::vector<Placed2D> bottom_left_place(std::span<const Footprint> footprints,
                                        int base_len, int base_wid) {
    std::vector<Placed2D> out;
    std::vector<PlacedRect> placed;
    for (std::size_t i = 0; i < footprints.size(); ++i) {
        const Footprint f = footprints[i];
        // Candidate corners: origin plus the right/top corners of placed rects.
        std::vector<std::pair<int, int>> candidates{{0, 0}};
        for (const auto& p : placed) {
            candidates.push_back({p.x + p.len, p.y});
            candidates.push_back({p.x, p.y + p.wid});
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second < b.second : a.first < b.first;
                  });

        bool done = false;
        for (const auto& [cx, cy] : candidates) {
            for (Rotation rot : {Rotation::Deg0, Rotation::Deg90}) {
                if (rot == Rotation::Deg90 && f.len == f.wid) continue;
                const int l = rot == Rotation::Deg0 ? f.len : f.wid;
                const int w = rot == Rotation::Deg0 ? f.wid : f.len;
                if (!spot_feasible(cx, cy, l, w, base_len, base_wid, placed)) continue;
                out.push_back({static_cast<int>(i), cx, cy, rot});
                placed.push_back({cx, cy, l, w});
                done = true;
                break;
            }
            if (done) break;
        }
    }
    return out;
}

std::vector<Placed2D> extreme_point_place(std::span<const Footprint> footprints,
                                          int base_len, int base_wid) {
    std::vector<Placed2D> out;
    std::vector<PlacedRect> placed;
    std::vector<std::pair<int, int>> points{{0, 0}};

    const auto point_order = [](const std::pair<int, int>& a,
                                const std::pair<int, int>& b) {
        const int sa = a.first + a.second, sb = b.first + b.second;
        if (sa != sb) return sa < sb;
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    };

    for (std::size_t i = 0; i < footprints.size(); ++i) {
        const Footprint f = footprints[i];
        std::sort(points.begin(), points.end(), point_order);
        bool done = false;
        for (std::size_t pi = 0; pi < points.size() && !done; ++pi) {
            const auto [cx, cy] = points[pi];
            for (Rotation rot : {Rotation::Deg0, Rotation::Deg90}) {
                if (rot == Rotation::Deg90 && f.len == f.wid) continue;
                const int l = rot == Rotation::Deg0 ? f.len : f.wid;
                const int w = rot == Rotation::Deg0 ? f.wid : f.len;
                if (!spot_feasible(cx, cy, l, w, base_len, base_wid, placed)) continue;
                out.push_back({static_cast<int>(i), cx, cy, rot});
                placed.push_back({cx, cy, l, w});
                points.erase(points.begin() + static_cast<std::ptrdiff_t>(pi));
                if (cx + l < base_len) points.push_back({cx + l, cy});
                if (cy + w < base_wid) points.push_back({cx, cy + w});
                done = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace pack3d

#include "pack3d/postprocess.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pack3d {

namespace {

bool overlaps_any(const PackedItem& item, const std::vector<PackedItem>& items,
                  std::size_t self) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i == self) continue;
        if (vol_overlap(item, items[i]) > 0) return true;
    }
    return false;
}

double support_of(const std::vector<PackedItem>& items, std::size_t idx) {
    return base_support_ratio(items[idx], items);
}

}  // namespace

std::vector<PackedItem> compact_layers(std::vector<PackedItem> items,
                                       const Pallet& pallet, const PostConfig& config,
                                       PostStats* stats) {
    // Items sharing a base z-level form a layer.
    std::map<int, std::vector<std::size_t>> layers;
    for (std::size_t i = 0; i < items.size(); ++i) layers[items[i].z0()].push_back(i);

    const auto try_move = [&](std::size_t idx, int dx, int dy) {
        PackedItem moved = items[idx];
        moved.placement.x_mm += dx;
        moved.placement.y_mm += dy;
        if (!contains(pallet, moved)) return false;
        if (overlaps_any(moved, items, idx)) return false;

        const PackedItem original = items[idx];
        items[idx] = moved;
        bool ok = support_of(items, idx) >= config.tau_compaction;
        if (ok) {
            // Items resting on the moved one must not lose their footing.
            for (std::size_t j = 0; j < items.size() && ok; ++j) {
                if (j == idx || items[j].z0() != original.z1()) continue;
                const double after = support_of(items, j);
                if (after >= config.tau_compaction) continue;
                items[idx] = original;
                const double before = support_of(items, j);
                items[idx] = moved;
                ok = after >= before;
            }
        }
        if (!ok) items[idx] = original;
        return ok;
    };

    // Full sweeps over every layer (ascending z) until one accepts nothing;
    // cross-layer blocking means a single per-layer pass is not a fixed point.
    bool accepted = true;
    while (accepted) {
        accepted = false;
        for (auto& [z, indices] : layers) {
            std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
                const int sa = items[a].x0() + items[a].y0();
                const int sb = items[b].x0() + items[b].y0();
                return sa != sb ? sa < sb : items[a].item.id < items[b].item.id;
            });
            for (std::size_t idx : indices) {
                bool moved_item = true;
                while (moved_item) {
                    moved_item = false;
                    for (int s : config.step_sizes) {
                        if (try_move(idx, -s, 0) || try_move(idx, 0, -s) ||
                            try_move(idx, -s, -s)) {
                            moved_item = true;
                            accepted = true;
                            if (stats) ++stats->moves_accepted;
                            break;
                        }
                    }
                }
            }
        }
    }
    return items;
}

FallbackResult fallback_place(std::vector<Item> unplaced,
                              std::vector<PackedItem> placed, const Pallet& pallet,
                              const PostConfig& config, PostStats* stats) {
    FallbackResult result;
    std::int64_t mass = total_mass(placed);

    for (const auto& item : unplaced) {
        bool done = false;
        int delta = std::max(1, config.fallback_grid_step);
        for (int round = 0; round <= config.refinement_rounds && !done; ++round) {
            // Candidate stacking heights: the ground plus top faces that
            // still leave room for the item.
            std::set<int> zs{0};
            for (const auto& p : placed) {
                if (p.z1() + item.height_mm <= pallet.height_mm) zs.insert(p.z1());
            }

            struct Candidate {
                int z, x, y;
                Rotation rot;
            };
            std::vector<Candidate> candidates;
            for (Rotation rot : {Rotation::Deg0, Rotation::Deg90}) {
                if (rot == Rotation::Deg90 && item.length_mm == item.width_mm) continue;
                const Dims d = effective_dims(item, rot);
                if (d.len > pallet.length_mm || d.wid > pallet.width_mm) continue;
                std::vector<int> xs, ys;
                for (int x = 0; x <= pallet.length_mm - d.len; x += delta) xs.push_back(x);
                if (xs.empty() || xs.back() != pallet.length_mm - d.len)
                    xs.push_back(pallet.length_mm - d.len);
                for (int y = 0; y <= pallet.width_mm - d.wid; y += delta) ys.push_back(y);
                if (ys.empty() || ys.back() != pallet.width_mm - d.wid)
                    ys.push_back(pallet.width_mm - d.wid);
                for (int z : zs) {
                    if (z + d.hgt > pallet.height_mm) continue;
                    for (int x : xs)
                        for (int y : ys) candidates.push_back({z, x, y, rot});
                }
            }
            std::sort(candidates.begin(), candidates.end(),
                      [](const Candidate& a, const Candidate& b) {
                          if (a.z != b.z) return a.z < b.z;
                          if (a.x + a.y != b.x + b.y) return a.x + a.y < b.x + b.y;
                          if (a.x != b.x) return a.x < b.x;
                          return a.rot == Rotation::Deg0 && b.rot == Rotation::Deg90;
                      });

            for (const auto& c : candidates) {
                if (mass + item.mass_g > pallet.max_payload_g) break;
                PackedItem p{item, {c.x, c.y, c.z, c.rot}};
                if (!contains(pallet, p)) continue;
                if (overlaps_any(p, placed, placed.size())) continue;
                if (c.z > 0 && base_support_ratio(p, placed) < config.tau_validation)
                    continue;
                placed.push_back(p);
                mass += item.mass_g;
                if (stats) ++stats->recovered;
                done = true;
                break;
            }
            delta = std::max(1, delta / 2);
        }
        if (!done) result.still_unplaced.push_back(item);
    }
    result.placed = std::move(placed);
    return result;
}

ValidateResult validate(std::vector<PackedItem> items, const Pallet& pallet,
                        const PostConfig& config, PostStats* stats) {
    std::sort(items.begin(), items.end(), [](const PackedItem& a, const PackedItem& b) {
        if (a.z0() != b.z0()) return a.z0() < b.z0();
        const int sa = a.x0() + a.y0(), sb = b.x0() + b.y0();
        if (sa != sb) return sa < sb;
        return a.item.id < b.item.id;
    });

    ValidateResult result;
    std::int64_t mass = 0;
    for (const auto& item : items) {
        bool ok = contains(pallet, item) && mass + item.item.mass_g <= pallet.max_payload_g;
        if (ok) {
            for (const auto& kept : result.kept) {
                if (vol_overlap(item, kept) > 0) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && item.z0() > 0) {
            ok = base_support_ratio(item, result.kept) >= config.tau_validation;
        }
        if (ok) {
            mass += item.item.mass_g;
            result.kept.push_back(item);
        } else {
            result.removed.push_back(item.item);
            if (stats) ++stats->removed;
        }
    }
    return result;
}

}  // namespace pack3d

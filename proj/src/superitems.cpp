#include "pack3d/superitems.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace pack3d {

namespace {

struct NormFootprint {
    int len;  // larger side
    int wid;  // smaller side
};

NormFootprint normalized_footprint(const Item& item) {
    return {std::max(item.length_mm, item.width_mm),
            std::min(item.length_mm, item.width_mm)};
}

Rotation rotation_for(const Item& item, const NormFootprint& fp) {
    if (item.length_mm == fp.len && item.width_mm == fp.wid) return Rotation::Deg0;
    return Rotation::Deg90;
}

bool column_like(const Item& item) {
    const NormFootprint fp = normalized_footprint(item);
    return static_cast<std::int64_t>(item.height_mm) * item.height_mm >
           static_cast<std::int64_t>(fp.len) * fp.wid;
}

bool footprint_fits(int len, int wid, const Pallet& pallet) {
    const int lo = std::min(len, wid), hi = std::max(len, wid);
    return lo <= std::min(pallet.length_mm, pallet.width_mm) &&
           hi <= std::max(pallet.length_mm, pallet.width_mm);
}

SuperItem make_single(const Item& item) {
    SuperItem s;
    s.kind = SuperKind::Single;
    s.members.push_back({item, 0, 0, 0, Rotation::Deg0});
    s.length_mm = item.length_mm;
    s.width_mm = item.width_mm;
    s.height_mm = item.height_mm;
    s.mass_g = item.mass_g;
    return s;
}

}  // namespace

std::vector<SuperItem> build_superitems(std::span<const Item> items,
                                        const Pallet& pallet,
                                        const SuperConfig& config) {
    const int cap = config.max_super_height_mm > 0 ? config.max_super_height_mm
                                                   : pallet.height_mm / 3;
    std::vector<SuperItem> out;
    std::vector<Item> singles;

    // Column-like items stack into vertical superitems; flat items merge into
    // horizontal blocks.
    std::map<std::pair<int, int>, std::vector<Item>> columns;
    using FlatKey = std::tuple<int, int, int, std::int64_t>;
    std::map<FlatKey, std::vector<Item>> flats;

    for (const auto& item : items) {
        const NormFootprint fp = normalized_footprint(item);
        if (config.enable_vertical && column_like(item) && item.height_mm <= cap) {
            columns[{fp.len, fp.wid}].push_back(item);
        } else if (config.enable_horizontal && !column_like(item)) {
            flats[{fp.len, fp.wid, item.height_mm, item.mass_g}].push_back(item);
        } else {
            singles.push_back(item);
        }
    }

    // Largest footprint first within each grouping pass.
    std::vector<std::pair<std::pair<int, int>, std::vector<Item>*>> column_groups;
    for (auto& [key, group] : columns) column_groups.push_back({key, &group});
    std::sort(column_groups.begin(), column_groups.end(), [](const auto& a, const auto& b) {
        const std::int64_t aa = static_cast<std::int64_t>(a.first.first) * a.first.second;
        const std::int64_t bb = static_cast<std::int64_t>(b.first.first) * b.first.second;
        return aa != bb ? aa > bb : a.first < b.first;
    });

    for (auto& [key, group] : column_groups) {
        std::sort(group->begin(), group->end(), [](const Item& a, const Item& b) {
            return a.height_mm != b.height_mm ? a.height_mm > b.height_mm : a.id < b.id;
        });
        const NormFootprint fp{key.first, key.second};
        std::size_t i = 0;
        while (i < group->size()) {
            SuperItem stack;
            stack.kind = SuperKind::Vertical;
            stack.length_mm = fp.len;
            stack.width_mm = fp.wid;
            int z = 0;
            while (i < group->size() && z + (*group)[i].height_mm <= cap) {
                const Item& item = (*group)[i];
                stack.members.push_back({item, 0, 0, z, rotation_for(item, fp)});
                stack.mass_g += item.mass_g;
                z += item.height_mm;
                ++i;
            }
            stack.height_mm = z;
            if (stack.members.size() >= 2) {
                out.push_back(std::move(stack));
            } else {
                for (auto& m : stack.members) singles.push_back(m.item);
            }
        }
    }

    std::vector<std::pair<FlatKey, std::vector<Item>*>> flat_groups;
    for (auto& [key, group] : flats) flat_groups.push_back({key, &group});
    std::sort(flat_groups.begin(), flat_groups.end(), [](const auto& a, const auto& b) {
        const std::int64_t aa =
            static_cast<std::int64_t>(std::get<0>(a.first)) * std::get<1>(a.first);
        const std::int64_t bb =
            static_cast<std::int64_t>(std::get<0>(b.first)) * std::get<1>(b.first);
        return aa != bb ? aa > bb : a.first < b.first;
    });

    for (auto& [key, group] : flat_groups) {
        std::sort(group->begin(), group->end(),
                  [](const Item& a, const Item& b) { return a.id < b.id; });
        const NormFootprint fp{std::get<0>(key), std::get<1>(key)};
        const int h = std::get<2>(key);
        std::size_t i = 0;
        const auto take_block = [&](int nx, int ny) {
            SuperItem block;
            block.kind = SuperKind::Horizontal;
            block.length_mm = nx * fp.len;
            block.width_mm = ny * fp.wid;
            block.height_mm = h;
            for (int bx = 0; bx < nx; ++bx) {
                for (int by = 0; by < ny; ++by) {
                    const Item& item = (*group)[i++];
                    block.members.push_back(
                        {item, bx * fp.len, by * fp.wid, 0, rotation_for(item, fp)});
                    block.mass_g += item.mass_g;
                }
            }
            out.push_back(std::move(block));
        };
        while (group->size() - i >= 4 && footprint_fits(2 * fp.len, 2 * fp.wid, pallet)) {
            take_block(2, 2);
        }
        while (group->size() - i >= 2 && footprint_fits(2 * fp.len, fp.wid, pallet)) {
            take_block(2, 1);
        }
        for (; i < group->size(); ++i) singles.push_back((*group)[i]);
    }

    std::sort(singles.begin(), singles.end(),
              [](const Item& a, const Item& b) { return a.id < b.id; });
    for (const auto& item : singles) out.push_back(make_single(item));
    return out;
}

std::vector<PackedItem> decompose(const SuperItem& super, const Placement& base) {
    std::vector<PackedItem> out;
    out.reserve(super.members.size());
    for (const auto& m : super.members) {
        PackedItem p;
        p.item = m.item;
        p.placement.z_mm = base.z_mm + m.dz;
        if (base.rotation == Rotation::Deg0) {
            p.placement.x_mm = base.x_mm + m.dx;
            p.placement.y_mm = base.y_mm + m.dy;
            p.placement.rotation = m.rot;
        } else {
            // Transpose the internal tiling along with the bounding box.
            p.placement.x_mm = base.x_mm + m.dy;
            p.placement.y_mm = base.y_mm + m.dx;
            p.placement.rotation =
                m.rot == Rotation::Deg0 ? Rotation::Deg90 : Rotation::Deg0;
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace pack3d

#include "pack3d/geometry.hpp"

#include <algorithm>

namespace pack3d {

namespace {

std::int64_t axis_overlap(int a0, int a1, int b0, int b1) {
    return std::max(0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

Dims effective_dims(const Item& item, Rotation rotation) {
    if (rotation == Rotation::Deg90) {
        return {item.width_mm, item.length_mm, item.height_mm};
    }
    return {item.length_mm, item.width_mm, item.height_mm};
}

bool contains(const Pallet& pallet, const PackedItem& packed) {
    if (packed.x0() < 0 || packed.y0() < 0 || packed.z0() < 0) return false;
    return packed.x1() <= pallet.length_mm && packed.y1() <= pallet.width_mm &&
           packed.z1() <= pallet.height_mm;
}

std::int64_t vol_overlap(const PackedItem& a, const PackedItem& b) {
    const std::int64_t dx = axis_overlap(a.x0(), a.x1(), b.x0(), b.x1());
    const std::int64_t dy = axis_overlap(a.y0(), a.y1(), b.y0(), b.y1());
    const std::int64_t dz = axis_overlap(a.z0(), a.z1(), b.z0(), b.z1());
    return dx * dy * dz;
}

double overlap_fraction(std::span<const PackedItem> items, const Pallet& pallet) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            sum += vol_overlap(items[i], items[j]);
        }
    }
    const std::int64_t bin = pallet.volume_mm3();
    if (bin <= 0) return sum > 0 ? 1.0 : 0.0;
    return static_cast<double>(sum) / static_cast<double>(bin);
}

int used_height(std::span<const PackedItem> items) {
    int top = 0;
    for (const auto& p : items) top = std::max(top, p.z1());
    return top;
}

double base_support_ratio(const PackedItem& item, std::span<const PackedItem> below) {
    if (item.z0() == 0) return 1.0;
    const std::int64_t base_area =
        static_cast<std::int64_t>(item.dims().len) * item.dims().wid;
    if (base_area <= 0) return 0.0;
    std::int64_t covered = 0;
    for (const auto& s : below) {
        if (s.z1() != item.z0()) continue;  // exact contact on the mm grid
        const std::int64_t dx = axis_overlap(item.x0(), item.x1(), s.x0(), s.x1());
        const std::int64_t dy = axis_overlap(item.y0(), item.y1(), s.y0(), s.y1());
        covered += dx * dy;
    }
    return std::min(1.0, static_cast<double>(covered) / static_cast<double>(base_area));
}

double side_contact_fraction(const PackedItem& item, Face face,
                             std::span<const PackedItem> neighbors) {
    // The face rectangle lives in a plane normal to x (PosX/NegX) or y.
    const bool x_normal = (face == Face::PosX || face == Face::NegX);
    const int plane = (face == Face::PosX)   ? item.x1()
                      : (face == Face::NegX) ? item.x0()
                      : (face == Face::PosY) ? item.y1()
                                             : item.y0();
    const std::int64_t face_area =
        static_cast<std::int64_t>(x_normal ? item.dims().wid : item.dims().len) *
        item.dims().hgt;
    if (face_area <= 0) return 0.0;

    std::int64_t covered = 0;
    for (const auto& n : neighbors) {
        if (&n == &item) continue;
        bool touching = false;
        switch (face) {
            case Face::PosX: touching = (n.x0() == plane); break;
            case Face::NegX: touching = (n.x1() == plane); break;
            case Face::PosY: touching = (n.y0() == plane); break;
            case Face::NegY: touching = (n.y1() == plane); break;
        }
        if (!touching) continue;
        const std::int64_t du =
            x_normal ? axis_overlap(item.y0(), item.y1(), n.y0(), n.y1())
                     : axis_overlap(item.x0(), item.x1(), n.x0(), n.x1());
        const std::int64_t dz = axis_overlap(item.z0(), item.z1(), n.z0(), n.z1());
        covered += du * dz;
    }
    return std::min(1.0, static_cast<double>(covered) / static_cast<double>(face_area));
}

bool is_boundary_face(const PackedItem& item, Face face, const Pallet& pallet) {
    switch (face) {
        case Face::PosX: return item.x1() == pallet.length_mm;
        case Face::NegX: return item.x0() == 0;
        case Face::PosY: return item.y1() == pallet.width_mm;
        case Face::NegY: return item.y0() == 0;
    }
    return false;
}

std::int64_t total_mass(std::span<const PackedItem> items) {
    std::int64_t m = 0;
    for (const auto& p : items) m += p.item.mass_g;
    return m;
}

}  // namespace pack3d

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pack3d {

// All coordinates and dimensions are integer millimeters; masses are integer
// grams. KPI values are computed in double precision on top of this grid.

enum class Rotation { Deg0, Deg90 };

struct Item {
    std::string id;
    int length_mm = 0;
    int width_mm = 0;
    int height_mm = 0;
    std::int64_t mass_g = 0;

    std::int64_t volume_mm3() const {
        return static_cast<std::int64_t>(length_mm) * width_mm * height_mm;
    }
};

struct Pallet {
    int length_mm = 0;   // L
    int width_mm = 0;    // W
    int height_mm = 0;   // H
    std::int64_t max_payload_g = 0;

    std::int64_t volume_mm3() const {
        return static_cast<std::int64_t>(length_mm) * width_mm * height_mm;
    }
};

struct Placement {
    int x_mm = 0;
    int y_mm = 0;
    int z_mm = 0;
    Rotation rotation = Rotation::Deg0;
};

struct Dims {
    int len = 0;
    int wid = 0;
    int hgt = 0;
};

// Footprint (and height) after applying the z-rotation; Deg90 swaps x/y,
// height is never tilted.
Dims effective_dims(const Item& item, Rotation rotation);

struct PackedItem {
    Item item;
    Placement placement;

    Dims dims() const { return effective_dims(item, placement.rotation); }
    int x0() const { return placement.x_mm; }
    int y0() const { return placement.y_mm; }
    int z0() const { return placement.z_mm; }
    int x1() const { return placement.x_mm + dims().len; }
    int y1() const { return placement.y_mm + dims().wid; }
    int z1() const { return placement.z_mm + dims().hgt; }
};

enum class Face { PosX, NegX, PosY, NegY };

// Containment: the whole box lies inside the pallet bounds.
bool contains(const Pallet& pallet, const PackedItem& packed);

// 3D intersection volume in mm^3. Symmetric; face contact counts as zero.
std::int64_t vol_overlap(const PackedItem& a, const PackedItem& b);

// Sum of pairwise intersection volumes (each unordered pair once) divided by
// the pallet volume.
double overlap_fraction(std::span<const PackedItem> items, const Pallet& pallet);

// Max top-face z over the items; 0 for an empty packing.
int used_height(std::span<const PackedItem> items);

// Fraction of the item's bottom face resting on top faces of items in
// `below` whose top z exactly equals the item's z. Ground (z = 0) counts as
// fully supported. Clamped to [0, 1].
double base_support_ratio(const PackedItem& item, std::span<const PackedItem> below);

// Fraction of the given vertical face covered by coplanar opposing faces of
// neighbors (exact coplanarity on the integer grid). Clamped to [0, 1].
double side_contact_fraction(const PackedItem& item, Face face,
                             std::span<const PackedItem> neighbors);

// True when the face is flush with the pallet boundary.
bool is_boundary_face(const PackedItem& item, Face face, const Pallet& pallet);

std::int64_t total_mass(std::span<const PackedItem> items);

}  // namespace pack3d

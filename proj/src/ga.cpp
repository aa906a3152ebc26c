#include "pack3d/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pack3d {

namespace {

struct Rect2D {
    int x, y, len, wid;
};

bool rects_overlap(const Rect2D& a, const Rect2D& b) {
    return a.x < b.x + b.len && b.x < a.x + a.len && a.y < b.y + b.wid &&
           b.y < a.y + a.wid;
}

Rect2D member_rect(const LayerMember& m, std::span<const SuperItem> units) {
    const SuperItem& u = units[static_cast<std::size_t>(m.unit)];
    const int len = m.rot == Rotation::Deg0 ? u.length_mm : u.width_mm;
    const int wid = m.rot == Rotation::Deg0 ? u.width_mm : u.length_mm;
    return {m.x, m.y, len, wid};
}

int unit_height(int unit, std::span<const SuperItem> units) {
    return units[static_cast<std::size_t>(unit)].height_mm;
}

bool unit_is_tall(const SuperItem& u) {
    return static_cast<std::int64_t>(u.height_mm) * u.height_mm >
           static_cast<std::int64_t>(u.length_mm) * u.width_mm;
}

void recompute_layers(Chromosome& c, std::span<const SuperItem> units) {
    std::erase_if(c, [](const Layer& l) { return l.members.empty(); });
    int z = 0;
    for (auto& layer : c) {
        layer.base_z = z;
        layer.height = 0;
        for (const auto& m : layer.members) {
            layer.height = std::max(layer.height, unit_height(m.unit, units));
        }
        z += layer.height;
    }
}

std::int64_t chromosome_mass(const Chromosome& c, std::span<const SuperItem> units) {
    std::int64_t m = 0;
    for (const auto& layer : c) {
        for (const auto& member : layer.members) {
            m += units[static_cast<std::size_t>(member.unit)].mass_g;
        }
    }
    return m;
}

int snap_up(int v, int grid) {
    if (grid <= 1) return v;
    return ((v + grid - 1) / grid) * grid;
}

enum class PlaceRule { BottomLeft, ExtremePoint };

// Incremental 2D insertion within one layer, candidates snapped up to the
// coarse grid.
class LayerGrid {
public:
    LayerGrid(int base_len, int base_wid, int grid)
        : base_len_(base_len), base_wid_(base_wid), grid_(grid) {}

    void add(const Rect2D& r) { rects_.push_back(r); }

    std::optional<Spot> try_insert(int len, int wid, PlaceRule rule) {
        std::vector<std::pair<int, int>> candidates{{0, 0}};
        for (const auto& r : rects_) {
            candidates.push_back({snap_up(r.x + r.len, grid_), r.y});
            candidates.push_back({r.x, snap_up(r.y + r.wid, grid_)});
        }
        std::sort(candidates.begin(), candidates.end(),
                  [rule](const auto& a, const auto& b) {
                      if (rule == PlaceRule::ExtremePoint) {
                          const int sa = a.first + a.second, sb = b.first + b.second;
                          if (sa != sb) return sa < sb;
                      }
                      if (a.second != b.second) return a.second < b.second;
                      return a.first < b.first;
                  });
        for (const auto& [cx, cy] : candidates) {
            for (Rotation rot : {Rotation::Deg0, Rotation::Deg90}) {
                if (rot == Rotation::Deg90 && len == wid) continue;
                const int l = rot == Rotation::Deg0 ? len : wid;
                const int w = rot == Rotation::Deg0 ? wid : len;
                if (feasible({cx, cy, l, w})) {
                    rects_.push_back({cx, cy, l, w});
                    return Spot{cx, cy, rot};
                }
            }
        }
        return std::nullopt;
    }

private:
    bool feasible(const Rect2D& r) const {
        if (r.x < 0 || r.y < 0 || r.x + r.len > base_len_ || r.y + r.wid > base_wid_)
            return false;
        for (const auto& p : rects_) {
            if (rects_overlap(p, r)) return false;
        }
        return true;
    }

    int base_len_, base_wid_, grid_;
    std::vector<Rect2D> rects_;
};

bool layer_member_feasible(const Layer& layer, std::size_t self,
                           const Rect2D& rect, const Pallet& pallet,
                           std::span<const SuperItem> units) {
    if (rect.x < 0 || rect.y < 0 || rect.x + rect.len > pallet.length_mm ||
        rect.y + rect.wid > pallet.width_mm)
        return false;
    for (std::size_t i = 0; i < layer.members.size(); ++i) {
        if (i == self) continue;
        if (rects_overlap(rect, member_rect(layer.members[i], units))) return false;
    }
    return true;
}

}  // namespace

int tournament_size(int g, int total_generations, int population) {
    const double frac = total_generations > 0
                            ? static_cast<double>(g) / total_generations
                            : 0.0;
    const int t = std::max(
        3, static_cast<int>(std::floor(population * (0.1 + 0.3 * frac))));
    return std::min(t, population);
}

double crossover_prob(int g, int total_generations) {
    const double frac =
        total_generations > 0 ? static_cast<double>(g) / total_generations : 0.0;
    return 0.5 * (1.0 + 0.1 * frac);
}

double mutation_prob(int g, int total_generations) {
    const double frac =
        total_generations > 0 ? static_cast<double>(g) / total_generations : 0.0;
    return 0.35 * (1.0 - 0.5 * frac);
}

std::vector<PackedItem> realize(const Chromosome& chromosome,
                                std::span<const SuperItem> units, int base_z) {
    std::vector<PackedItem> out;
    for (const auto& layer : chromosome) {
        for (const auto& m : layer.members) {
            Placement base{m.x, m.y, base_z + layer.base_z, m.rot};
            for (auto& p : decompose(units[static_cast<std::size_t>(m.unit)], base)) {
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

bool check_chromosome(const Chromosome& chromosome, std::span<const SuperItem> units,
                      const GaContext& ctx) {
    std::unordered_set<int> seen;
    int z = 0;
    std::int64_t mass = 0;
    for (const auto& layer : chromosome) {
        if (layer.members.empty()) return false;
        if (layer.base_z != z) return false;
        int max_h = 0;
        for (std::size_t i = 0; i < layer.members.size(); ++i) {
            const auto& m = layer.members[i];
            if (m.unit < 0 || static_cast<std::size_t>(m.unit) >= units.size())
                return false;
            if (!seen.insert(m.unit).second) return false;
            const Rect2D r = member_rect(m, units);
            if (r.x < 0 || r.y < 0 || r.x + r.len > ctx.pallet.length_mm ||
                r.y + r.wid > ctx.pallet.width_mm)
                return false;
            for (std::size_t j = i + 1; j < layer.members.size(); ++j) {
                if (rects_overlap(r, member_rect(layer.members[j], units)))
                    return false;
            }
            max_h = std::max(max_h, unit_height(m.unit, units));
            mass += units[static_cast<std::size_t>(m.unit)].mass_g;
        }
        if (layer.height != max_h) return false;
        z += layer.height;
    }
    return z <= ctx.height_budget() && mass <= ctx.mass_budget_g;
}

double chromosome_fitness(const Chromosome& chromosome,
                          std::span<const SuperItem> units, const GaContext& ctx,
                          const GaConfig& config,
                          const std::unordered_set<std::string>& residual_ids) {
    const auto items = realize(chromosome, units, 0);
    std::unordered_set<std::string> placed_ids;
    placed_ids.reserve(items.size());
    for (const auto& p : items) placed_ids.insert(p.item.id);
    const KpiVector kpis =
        evaluate_kpis(items, ctx.pallet, placed_ids, residual_ids, config.kpi);
    return fitness(kpis, overlap_fraction(items, ctx.pallet), config.weights);
}

namespace {

enum class SortRule { Volume, Area, Random };

Chromosome build_layerwise(std::vector<int> order, std::span<const SuperItem> units,
                           const GaContext& ctx, const GaConfig& config,
                           PlaceRule rule) {
    Chromosome c;
    std::int64_t mass = 0;
    int top = 0;
    std::optional<LayerGrid> grid;
    Layer current;

    const auto close_layer = [&]() {
        if (!current.members.empty()) {
            top = current.base_z + current.height;
            c.push_back(std::move(current));
        }
        current = Layer{};
        grid.reset();
    };

    for (int idx : order) {
        const SuperItem& u = units[static_cast<std::size_t>(idx)];
        if (mass + u.mass_g > ctx.mass_budget_g) continue;

        bool placed = false;
        if (grid) {
            const int new_height = std::max(current.height, u.height_mm);
            if (current.base_z + new_height <= ctx.height_budget()) {
                if (auto spot = grid->try_insert(u.length_mm, u.width_mm, rule)) {
                    current.members.push_back({idx, spot->x, spot->y, spot->rot});
                    current.height = new_height;
                    placed = true;
                }
            }
        }
        if (!placed) {
            const int base_z = current.members.empty() ? current.base_z
                                                       : current.base_z + current.height;
            if (base_z + u.height_mm > ctx.height_budget()) continue;
            close_layer();
            current.base_z = top;
            grid.emplace(ctx.pallet.length_mm, ctx.pallet.width_mm, config.grid_step_mm);
            if (auto spot = grid->try_insert(u.length_mm, u.width_mm, rule)) {
                current.members.push_back({idx, spot->x, spot->y, spot->rot});
                current.height = u.height_mm;
                placed = true;
            }
        }
        if (placed) mass += u.mass_g;
    }
    close_layer();
    return c;
}

std::vector<int> sorted_order(std::span<const SuperItem> units, SortRule rule,
                              std::mt19937_64& rng) {
    std::vector<int> order(units.size());
    std::iota(order.begin(), order.end(), 0);
    switch (rule) {
        case SortRule::Volume:
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const auto va = units[static_cast<std::size_t>(a)].item_volume_mm3();
                const auto vb = units[static_cast<std::size_t>(b)].item_volume_mm3();
                return va != vb ? va > vb : a < b;
            });
            break;
        case SortRule::Area:
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const auto va = units[static_cast<std::size_t>(a)].footprint_area_mm2();
                const auto vb = units[static_cast<std::size_t>(b)].footprint_area_mm2();
                return va != vb ? va > vb : a < b;
            });
            break;
        case SortRule::Random:
            std::shuffle(order.begin(), order.end(), rng);
            break;
    }
    return order;
}

}  // namespace

Population initialize_population(std::span<const SuperItem> units, const GaContext& ctx,
                                 const GaConfig& config, std::mt19937_64& rng) {
    constexpr std::pair<SortRule, PlaceRule> kCombos[] = {
        {SortRule::Volume, PlaceRule::BottomLeft},
        {SortRule::Volume, PlaceRule::ExtremePoint},
        {SortRule::Area, PlaceRule::BottomLeft},
        {SortRule::Area, PlaceRule::ExtremePoint},
        {SortRule::Random, PlaceRule::BottomLeft},
        {SortRule::Random, PlaceRule::ExtremePoint},
    };
    Population pop;
    pop.reserve(static_cast<std::size_t>(config.population));
    for (int i = 0; i < config.population; ++i) {
        const auto& [sort_rule, place_rule] = kCombos[i % 6];
        auto order = sorted_order(units, sort_rule, rng);
        Evaluated e;
        e.chromosome = build_layerwise(std::move(order), units, ctx, config, place_rule);
        pop.push_back(std::move(e));
    }
    return pop;
}

namespace {

// Appends the given units as new final layers via BottomLeft, skipping any
// that break the height or payload budget.
void append_as_layers(Chromosome& c, std::vector<int> lost,
                      std::span<const SuperItem> units, const GaContext& ctx,
                      const GaConfig& config) {
    std::sort(lost.begin(), lost.end(), [&](int a, int b) {
        const auto va = units[static_cast<std::size_t>(a)].footprint_area_mm2();
        const auto vb = units[static_cast<std::size_t>(b)].footprint_area_mm2();
        return va != vb ? va > vb : a < b;
    });
    std::int64_t mass = chromosome_mass(c, units);
    int top = c.empty() ? 0 : c.back().base_z + c.back().height;

    while (!lost.empty()) {
        Layer layer;
        layer.base_z = top;
        LayerGrid grid(ctx.pallet.length_mm, ctx.pallet.width_mm, config.grid_step_mm);
        std::vector<int> still;
        for (int idx : lost) {
            const SuperItem& u = units[static_cast<std::size_t>(idx)];
            if (mass + u.mass_g > ctx.mass_budget_g ||
                top + std::max(layer.height, u.height_mm) > ctx.height_budget()) {
                still.push_back(idx);
                continue;
            }
            if (auto spot = grid.try_insert(u.length_mm, u.width_mm, PlaceRule::BottomLeft)) {
                layer.members.push_back({idx, spot->x, spot->y, spot->rot});
                layer.height = std::max(layer.height, u.height_mm);
                mass += u.mass_g;
            } else {
                still.push_back(idx);
            }
        }
        if (layer.members.empty()) break;
        top += layer.height;
        c.push_back(std::move(layer));
        if (still.size() == lost.size()) break;
        lost = std::move(still);
    }
}

}  // namespace

Chromosome crossover(const Evaluated& parent_a, const Evaluated& parent_b,
                     std::span<const SuperItem> units, const GaContext& ctx,
                     const GaConfig& config, std::mt19937_64& rng) {
    const Chromosome& a = parent_a.chromosome;
    const Chromosome& b = parent_b.chromosome;
    const Chromosome& fitter =
        parent_b.fitness > parent_a.fitness ? b : a;

    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto cut_of = [u](std::size_t n) {
        return std::min(n, static_cast<std::size_t>(u * (static_cast<double>(n) + 1.0)));
    };
    const std::size_t cut_a = cut_of(a.size());
    const std::size_t cut_b = cut_of(b.size());

    Chromosome child(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut_a));
    std::unordered_set<int> present;
    for (const auto& layer : child) {
        for (const auto& m : layer.members) present.insert(m.unit);
    }
    for (std::size_t i = cut_b; i < b.size(); ++i) {
        Layer layer = b[i];
        std::erase_if(layer.members, [&](const LayerMember& m) {
            return !present.insert(m.unit).second;
        });
        if (!layer.members.empty()) child.push_back(std::move(layer));
    }
    recompute_layers(child, units);

    std::unordered_set<int> universe;
    for (const auto* parent : {&a, &b}) {
        for (const auto& layer : *parent) {
            for (const auto& m : layer.members) universe.insert(m.unit);
        }
    }
    std::vector<int> lost;
    for (int idx : universe) {
        if (!present.count(idx)) lost.push_back(idx);
    }
    std::sort(lost.begin(), lost.end());
    append_as_layers(child, std::move(lost), units, ctx, config);

    if (!check_chromosome(child, units, ctx)) return fitter;
    return child;
}

namespace {

using MutateOp = std::optional<Chromosome> (*)(const Chromosome&,
                                               std::span<const SuperItem>,
                                               const GaContext&, const GaConfig&,
                                               std::mt19937_64&);

// Slides one member as far as feasible along the given step direction.
bool slide_member(Layer& layer, std::size_t idx, int step_x, int step_y,
                  const Pallet& pallet, std::span<const SuperItem> units) {
    bool moved = false;
    for (int s : {25, 10, 5, 1}) {
        while (true) {
            LayerMember& m = layer.members[idx];
            Rect2D r = member_rect(m, units);
            r.x += step_x * s;
            r.y += step_y * s;
            if (!layer_member_feasible(layer, idx, r, pallet, units)) break;
            m.x = r.x;
            m.y = r.y;
            moved = true;
        }
    }
    return moved;
}

std::optional<Chromosome> op_center_tall(const Chromosome& c,
                                         std::span<const SuperItem> units,
                                         const GaContext& ctx, const GaConfig&,
                                         std::mt19937_64&) {
    Chromosome out = c;
    bool moved = false;
    const int cx = ctx.pallet.length_mm / 2;
    const int cy = ctx.pallet.width_mm / 2;
    for (auto& layer : out) {
        for (std::size_t i = 0; i < layer.members.size(); ++i) {
            const SuperItem& u = units[static_cast<std::size_t>(layer.members[i].unit)];
            if (!unit_is_tall(u)) continue;
            const Rect2D r = member_rect(layer.members[i], units);
            const int sx = (r.x + r.len / 2) < cx ? 1 : -1;
            const int sy = (r.y + r.wid / 2) < cy ? 1 : -1;
            // Step toward the pallet center, stopping at the midpoint.
            for (int s : {25, 10, 5, 1}) {
                while (true) {
                    LayerMember& m = layer.members[i];
                    Rect2D cand = member_rect(m, units);
                    const int before = std::abs(cand.x + cand.len / 2 - cx) +
                                       std::abs(cand.y + cand.wid / 2 - cy);
                    cand.x += sx * s;
                    cand.y += sy * s;
                    const int after = std::abs(cand.x + cand.len / 2 - cx) +
                                      std::abs(cand.y + cand.wid / 2 - cy);
                    if (after >= before ||
                        !layer_member_feasible(layer, i, cand, ctx.pallet, units))
                        break;
                    m.x = cand.x;
                    m.y = cand.y;
                    moved = true;
                }
            }
        }
    }
    if (!moved) return std::nullopt;
    return out;
}

std::optional<Chromosome> op_lower_tall(const Chromosome& c,
                                        std::span<const SuperItem> units,
                                        const GaContext& ctx, const GaConfig&,
                                        std::mt19937_64&) {
    Chromosome out = c;
    for (std::size_t j = 1; j < out.size(); ++j) {
        for (std::size_t mi = 0; mi < out[j].members.size(); ++mi) {
            const LayerMember m = out[j].members[mi];
            const SuperItem& u = units[static_cast<std::size_t>(m.unit)];
            if (!unit_is_tall(u)) continue;
            for (std::size_t i = 0; i < j; ++i) {
                if (u.height_mm > out[i].height) continue;  // keep layer heights fixed
                LayerGrid grid(ctx.pallet.length_mm, ctx.pallet.width_mm, 1);
                for (const auto& other : out[i].members) {
                    grid.add(member_rect(other, units));
                }
                if (auto spot =
                        grid.try_insert(u.length_mm, u.width_mm, PlaceRule::BottomLeft)) {
                    out[i].members.push_back({m.unit, spot->x, spot->y, spot->rot});
                    out[j].members.erase(out[j].members.begin() +
                                         static_cast<std::ptrdiff_t>(mi));
                    recompute_layers(out, units);
                    return out;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<Chromosome> op_fill_voids(const Chromosome& c,
                                        std::span<const SuperItem> units,
                                        const GaContext& ctx, const GaConfig&,
                                        std::mt19937_64&) {
    if (c.size() < 2) return std::nullopt;
    Chromosome out = c;
    Layer& last = out.back();
    for (std::size_t mi = 0; mi < last.members.size(); ++mi) {
        const LayerMember m = last.members[mi];
        const SuperItem& u = units[static_cast<std::size_t>(m.unit)];
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            if (u.height_mm > out[i].height) continue;
            LayerGrid grid(ctx.pallet.length_mm, ctx.pallet.width_mm, 1);
            for (const auto& other : out[i].members) grid.add(member_rect(other, units));
            if (auto spot =
                    grid.try_insert(u.length_mm, u.width_mm, PlaceRule::BottomLeft)) {
                out[i].members.push_back({m.unit, spot->x, spot->y, spot->rot});
                last.members.erase(last.members.begin() +
                                   static_cast<std::ptrdiff_t>(mi));
                recompute_layers(out, units);
                return out;
            }
        }
    }
    return std::nullopt;
}

std::optional<Chromosome> op_compact_origin(const Chromosome& c,
                                            std::span<const SuperItem> units,
                                            const GaContext& ctx, const GaConfig&,
                                            std::mt19937_64&) {
    Chromosome out = c;
    bool moved = false;
    for (auto& layer : out) {
        std::vector<std::size_t> order(layer.members.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ma = layer.members[a];
            const auto& mb = layer.members[b];
            return ma.x + ma.y != mb.x + mb.y ? ma.x + ma.y < mb.x + mb.y : a < b;
        });
        bool any = true;
        while (any) {
            any = false;
            for (std::size_t idx : order) {
                if (slide_member(layer, idx, -1, 0, ctx.pallet, units)) any = true;
                if (slide_member(layer, idx, 0, -1, ctx.pallet, units)) any = true;
            }
            moved = moved || any;
        }
    }
    if (!moved) return std::nullopt;
    return out;
}

std::optional<Chromosome> op_side_contact(const Chromosome& c,
                                          std::span<const SuperItem> units,
                                          const GaContext& ctx, const GaConfig&,
                                          std::mt19937_64& rng) {
    if (c.empty()) return std::nullopt;
    Chromosome out = c;
    Layer& layer = out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)];
    if (layer.members.empty()) return std::nullopt;
    const std::size_t idx =
        std::uniform_int_distribution<std::size_t>(0, layer.members.size() - 1)(rng);
    // Snug the member against the nearest obstacle to its left, then below.
    const bool a = slide_member(layer, idx, -1, 0, ctx.pallet, units);
    const bool b = slide_member(layer, idx, 0, -1, ctx.pallet, units);
    if (!a && !b) return std::nullopt;
    return out;
}

std::optional<Chromosome> op_bottom_overlap(const Chromosome& c,
                                            std::span<const SuperItem> units,
                                            const GaContext& ctx, const GaConfig&,
                                            std::mt19937_64& rng) {
    if (c.size() < 2) return std::nullopt;
    Chromosome out = c;
    const std::size_t j =
        std::uniform_int_distribution<std::size_t>(1, out.size() - 1)(rng);
    Layer& layer = out[j];
    const Layer& below = out[j - 1];
    if (layer.members.empty() || below.members.empty()) return std::nullopt;
    const std::size_t idx =
        std::uniform_int_distribution<std::size_t>(0, layer.members.size() - 1)(rng);
    // Align onto the below member with the largest footprint.
    const auto& anchor = *std::max_element(
        below.members.begin(), below.members.end(),
        [&](const LayerMember& a, const LayerMember& b) {
            const Rect2D ra = member_rect(a, units), rb = member_rect(b, units);
            return static_cast<std::int64_t>(ra.len) * ra.wid <
                   static_cast<std::int64_t>(rb.len) * rb.wid;
        });
    Rect2D r = member_rect(layer.members[idx], units);
    r.x = anchor.x;
    r.y = anchor.y;
    if (!layer_member_feasible(layer, idx, r, ctx.pallet, units)) return std::nullopt;
    if (layer.members[idx].x == r.x && layer.members[idx].y == r.y) return std::nullopt;
    layer.members[idx].x = r.x;
    layer.members[idx].y = r.y;
    return out;
}

std::optional<Chromosome> op_swap_items(const Chromosome& c,
                                        std::span<const SuperItem> units,
                                        const GaContext& ctx, const GaConfig&,
                                        std::mt19937_64& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t li = 0; li < c.size(); ++li) {
        for (std::size_t mi = 0; mi < c[li].members.size(); ++mi) all.push_back({li, mi});
    }
    if (all.size() < 2) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const auto [la, ma] = all[pick(rng)];
    const auto [lb, mb] = all[pick(rng)];
    if (la == lb && ma == mb) return std::nullopt;
    Chromosome out = c;
    std::swap(out[la].members[ma].x, out[lb].members[mb].x);
    std::swap(out[la].members[ma].y, out[lb].members[mb].y);
    recompute_layers(out, units);
    if (!check_chromosome(out, units, ctx)) return std::nullopt;
    return out;
}

std::optional<Chromosome> op_swap_layers(const Chromosome& c,
                                         std::span<const SuperItem> units,
                                         const GaContext& ctx, const GaConfig&,
                                         std::mt19937_64& rng) {
    if (c.size() < 2) return std::nullopt;
    Chromosome out = c;
    std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (a == b) return std::nullopt;
    std::swap(out[a], out[b]);
    recompute_layers(out, units);
    return out;
}

std::optional<Chromosome> op_split_layer(const Chromosome& c,
                                         std::span<const SuperItem> units,
                                         const GaContext& ctx, const GaConfig&,
                                         std::mt19937_64& rng) {
    std::vector<std::size_t> splittable;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].members.size() >= 2) splittable.push_back(i);
    }
    if (splittable.empty()) return std::nullopt;
    Chromosome out = c;
    const std::size_t li = splittable[std::uniform_int_distribution<std::size_t>(
        0, splittable.size() - 1)(rng)];
    Layer& src = out[li];
    Layer second;
    const std::size_t half = src.members.size() / 2;
    second.members.assign(src.members.begin() + static_cast<std::ptrdiff_t>(half),
                          src.members.end());
    src.members.resize(half);
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(li) + 1, std::move(second));
    recompute_layers(out, units);
    if (!check_chromosome(out, units, ctx)) return std::nullopt;
    return out;
}

constexpr MutateOp kMutateOps[] = {
    op_center_tall, op_lower_tall,    op_fill_voids,
    op_compact_origin, op_side_contact, op_bottom_overlap,
    op_swap_items,  op_swap_layers,   op_split_layer,
};

}  // namespace

Chromosome mutate(const Chromosome& chromosome, std::span<const SuperItem> units,
                  const GaContext& ctx, const GaConfig& config, std::mt19937_64& rng) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(
        0, std::size(kMutateOps) - 1)(rng);
    auto result = kMutateOps[k](chromosome, units, ctx, config, rng);
    if (!result) return chromosome;
    if (!check_chromosome(*result, units, ctx)) return chromosome;
    return *result;
}

namespace {

std::size_t tournament_pick(const Population& pop, int size, std::mt19937_64& rng) {
    std::vector<std::size_t> indices(pop.size());
    std::iota(indices.begin(), indices.end(), 0);
    const int t = std::min<int>(size, static_cast<int>(pop.size()));
    std::size_t best = pop.size();
    for (int i = 0; i < t; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                        indices.size() - 1);
        std::swap(indices[static_cast<std::size_t>(i)], indices[pick(rng)]);
        const std::size_t cand = indices[static_cast<std::size_t>(i)];
        if (best == pop.size() || pop[cand].fitness > pop[best].fitness ||
            (pop[cand].fitness == pop[best].fitness && cand < best)) {
            best = cand;
        }
    }
    return best;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

EvolveResult evolve(std::span<const SuperItem> units, const GaContext& ctx,
                    const GaConfig& config) {
    if (config.population < 2) throw std::invalid_argument("population must be >= 2");
    if (config.generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (!config.weights.valid()) {
        throw std::invalid_argument("kpi weights must be non-negative and sum to one");
    }

    std::unordered_set<std::string> residual_ids;
    for (const auto& u : units) {
        for (const auto& m : u.members) residual_ids.insert(m.item.id);
    }

    // Independent streams so initialization noise cannot perturb the
    // evolutionary sequence.
    std::mt19937_64 rng_init(splitmix64(config.seed));
    std::mt19937_64 rng_evolve(splitmix64(config.seed + 1));

    Population pop = initialize_population(units, ctx, config, rng_init);
    for (auto& e : pop) {
        e.fitness = chromosome_fitness(e.chromosome, units, ctx, config, residual_ids);
    }

    EvolveResult result;
    result.best = pop.front().chromosome;
    result.best_fitness = pop.front().fitness;
    for (const auto& e : pop) {
        if (e.fitness > result.best_fitness) {
            result.best = e.chromosome;
            result.best_fitness = e.fitness;
        }
    }

    const int elite_count = std::max(
        1, static_cast<int>(std::ceil(config.elite_rate * config.population)));

    for (int g = 1; g <= config.generations; ++g) {
        const int t = tournament_size(g, config.generations, config.population);
        const double pc = crossover_prob(g, config.generations);
        const double pm = mutation_prob(g, config.generations);

        std::vector<std::size_t> ranked(pop.size());
        std::iota(ranked.begin(), ranked.end(), 0);
        std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            return pop[a].fitness > pop[b].fitness;
        });

        Population next;
        next.reserve(pop.size());
        for (int i = 0; i < elite_count && i < static_cast<int>(ranked.size()); ++i) {
            next.push_back(pop[ranked[static_cast<std::size_t>(i)]]);
        }

        std::uniform_real_distribution<double> coin(0.0, 1.0);
        while (static_cast<int>(next.size()) < config.population) {
            const std::size_t i1 = tournament_pick(pop, t, rng_evolve);
            const std::size_t i2 = tournament_pick(pop, t, rng_evolve);
            const Evaluated& p1 = pop[i1];
            const Evaluated& p2 = pop[i2];

            Evaluated child;
            if (coin(rng_evolve) < pc) {
                child.chromosome = crossover(p1, p2, units, ctx, config, rng_evolve);
            } else {
                child.chromosome =
                    (p2.fitness > p1.fitness ? p2 : p1).chromosome;
            }
            if (coin(rng_evolve) < pm) {
                child.chromosome = mutate(child.chromosome, units, ctx, config, rng_evolve);
            }
            child.fitness =
                chromosome_fitness(child.chromosome, units, ctx, config, residual_ids);
            next.push_back(std::move(child));
        }
        pop = std::move(next);

        for (const auto& e : pop) {
            if (e.fitness > result.best_fitness) {
                result.best = e.chromosome;
                result.best_fitness = e.fitness;
            }
        }
        result.trace.push_back(result.best_fitness);
    }
    return result;
}

MergeResult merge_with_base(std::vector<PackedItem> base_placed, const Chromosome& best,
                            std::span<const SuperItem> units, const Pallet& pallet) {
    MergeResult result;
    const int top = used_height(base_placed);
    std::int64_t mass = total_mass(base_placed);
    result.placed = std::move(base_placed);

    for (const auto& candidate : realize(best, units, top)) {
        bool ok = contains(pallet, candidate) &&
                  mass + candidate.item.mass_g <= pallet.max_payload_g;
        if (ok) {
            for (const auto& existing : result.placed) {
                if (vol_overlap(candidate, existing) > 0) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            mass += candidate.item.mass_g;
            result.placed.push_back(candidate);
        } else {
            result.unplaced.push_back(candidate.item);
        }
    }
    return result;
}

}  // namespace pack3d

#include "pack3d/pipeline.hpp"

#include <chrono>
#include <sstream>
#include <unordered_map>

namespace pack3d {

std::string stage_name(Stage stage) {
    switch (stage) {
        case Stage::MaxRectsOnly: return "maxrects-only";
        case Stage::HybridGa: return "hybrid-ga";
        case Stage::HybridGaPP: return "hybrid-ga-pp";
    }
    return "unknown";
}

std::string RunConfig::config_hash() const {
    std::ostringstream s;
    s << pallet.length_mm << ',' << pallet.width_mm << ',' << pallet.height_mm << ','
      << pallet.max_payload_g << ',' << super.max_super_height_mm << ','
      << super.enable_horizontal << ',' << super.enable_vertical << ','
      << constructive.layer_height_tolerance << ',' << ga.population << ','
      << ga.generations << ',' << ga.elite_rate << ',' << ga.seed << ','
      << ga.grid_step_mm << ',' << ga.kpi.tau_side << ',' << ga.kpi.tau_surface << ','
      << ga.kpi.voxel_grid << ',' << post.tau_compaction << ',' << post.tau_validation
      << ',' << post.fallback_grid_step << ',' << post.refinement_rounds << ','
      << stage_name(stage);
    for (double a : ga.weights.alpha) s << ',' << a;
    for (int v : post.step_sizes) s << ',' << v;

    // FNV-1a over the canonical config string.
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

PackResult pack_order(const Order& order, const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    const std::vector<Item> items = expand_items(order);
    const std::vector<SuperItem> supers =
        build_superitems(items, config.pallet, config.super);
    const BaseSolution base =
        build_base_solution(supers, config.pallet, config.constructive);

    PackResult result;
    std::vector<PackedItem> placed = base.placed;
    std::vector<Item> unplaced;

    const bool run_ga = config.stage != Stage::MaxRectsOnly && !base.residual.empty();
    if (run_ga) {
        std::vector<SuperItem> units;
        units.reserve(base.residual.size());
        for (int idx : base.residual) units.push_back(supers[static_cast<std::size_t>(idx)]);

        GaContext ctx{config.pallet, base.top_z,
                      config.pallet.max_payload_g - base.placed_mass_g};
        const EvolveResult evolved = evolve(units, ctx, config.ga);
        result.fitness_trace = evolved.trace;

        MergeResult merged =
            merge_with_base(std::move(placed), evolved.best, units, config.pallet);
        placed = std::move(merged.placed);
        unplaced = std::move(merged.unplaced);

        // Residual items the best chromosome never placed.
        std::unordered_map<std::string, bool> in_layout;
        for (const auto& p : placed) in_layout[p.item.id] = true;
        for (const auto& u : unplaced) in_layout[u.id] = true;
        for (const auto& unit : units) {
            for (const auto& m : unit.members) {
                if (!in_layout.count(m.item.id)) unplaced.push_back(m.item);
            }
        }
    } else {
        for (int idx : base.residual) {
            for (const auto& m : supers[static_cast<std::size_t>(idx)].members) {
                unplaced.push_back(m.item);
            }
        }
    }

    if (config.stage == Stage::HybridGaPP) {
        placed = compact_layers(std::move(placed), config.pallet, config.post,
                                &result.post_stats);
        FallbackResult fb = fallback_place(std::move(unplaced), std::move(placed),
                                           config.pallet, config.post, &result.post_stats);
        ValidateResult v = validate(std::move(fb.placed), config.pallet, config.post,
                                    &result.post_stats);
        placed = std::move(v.kept);
        unplaced = std::move(fb.still_unplaced);
        unplaced.insert(unplaced.end(), v.removed.begin(), v.removed.end());
    }

    const auto stop = std::chrono::steady_clock::now();
    result.runtime_s =
        config.report_runtime
            ? std::chrono::duration<double>(stop - start).count()
            : 0.0;

    result.report = eval_metrics(placed, config.pallet,
                                 static_cast<int>(items.size()), result.runtime_s,
                                 config.ga.kpi);
    result.report.order_id = order.order_id;

    result.layout.order_id = order.order_id;
    result.layout.pallet = config.pallet;
    for (const auto& p : placed) {
        result.layout.placements.push_back(
            {p.item.id, p.x0(), p.y0(), p.z0(), p.placement.rotation});
    }
    for (const auto& u : unplaced) result.layout.unplaced.push_back(u.id);
    result.layout.meta.seed = config.ga.seed;
    result.layout.meta.config_hash = config.config_hash();

    result.placed = std::move(placed);
    return result;
}

KpiReport evaluate_layout(const LayoutDocument& doc, std::span<const Item> items,
                          int total_items, const KpiParams& params) {
    std::unordered_map<std::string, const Item*> by_id;
    for (const auto& item : items) by_id[item.id] = &item;

    std::vector<PackedItem> placed;
    placed.reserve(doc.placements.size());
    for (const auto& lp : doc.placements) {
        const auto it = by_id.find(lp.id);
        if (it == by_id.end()) {
            throw ParseError("layout references unknown item id '" + lp.id + "'");
        }
        placed.push_back({*it->second, {lp.x, lp.y, lp.z, lp.rot}});
    }
    KpiReport report = eval_metrics(placed, doc.pallet, total_items, 0.0, params);
    report.order_id = doc.order_id;
    return report;
}

}  // namespace pack3d

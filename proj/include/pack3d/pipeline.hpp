#pragma once

#include <string>
#include <vector>

#include "pack3d/constructive.hpp"
#include "pack3d/ga.hpp"
#include "pack3d/kpi.hpp"
#include "pack3d/order_io.hpp"
#include "pack3d/postprocess.hpp"
#include "pack3d/superitems.hpp"

namespace pack3d {

// Ablation ladder: constructive baseline, GA refinement, full pipeline.
enum class Stage { MaxRectsOnly, HybridGa, HybridGaPP };

std::string stage_name(Stage stage);

struct RunConfig {
    Pallet pallet{1200, 800, 2000, 1'000'000};
    SuperConfig super;
    ConstructiveConfig constructive;
    GaConfig ga;
    PostConfig post;
    Stage stage = Stage::HybridGaPP;
    bool report_runtime = true;  // false zeroes runtime fields for
                                 // byte-reproducible outputs

    std::string config_hash() const;
};

struct PackResult {
    LayoutDocument layout;
    KpiReport report;
    std::vector<PackedItem> placed;
    std::vector<double> fitness_trace;
    PostStats post_stats;
    double runtime_s = 0.0;
};

// Runs the selected stage ladder on one order. Deterministic given the seed.
PackResult pack_order(const Order& order, const RunConfig& config);

// Scores an externally produced layout; items supply the dimensions and
// masses the layout schema references by id.
KpiReport evaluate_layout(const LayoutDocument& doc, std::span<const Item> items,
                          int total_items, const KpiParams& params = {});

}  // namespace pack3d

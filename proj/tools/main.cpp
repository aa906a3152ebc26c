// Command line front end: pack one order, evaluate an external layout, run
// the benchmark harness, or filter an order set.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pack3d/bench.hpp"
#include "pack3d/pipeline.hpp"

namespace fs = std::filesystem;
using pack3d::Order;
using pack3d::RunConfig;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Accepts a directory of *.json order files (sorted by name), a JSON array of
// order documents, or a single order document.
std::vector<Order> load_orders(const std::string& path) {
    std::vector<Order> orders;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path)) {
            if (e.is_regular_file() && e.path().extension() == ".json") {
                files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) orders.push_back(pack3d::parse_order(slurp(f.string())));
        return orders;
    }
    const std::string text = slurp(path);
    const auto doc = nlohmann::json::parse(text);
    if (doc.is_array()) {
        for (const auto& o : doc) orders.push_back(pack3d::parse_order(o.dump()));
    } else {
        orders.push_back(pack3d::parse_order(text));
    }
    return orders;
}

struct CommonOpts {
    std::string pallet = "1200x800x2000";
    std::int64_t max_payload = 1'000'000;
    std::uint64_t seed = 0;
    int pop = 100;
    int generations = 50;
    std::vector<double> weights;
    std::string stage = "hybrid-ga-pp";
    int grid_step = 25;
    double tau_side = 0.2;
    double tau_surface = 0.75;
    bool no_timing = false;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--pallet", o.pallet, "Pallet dimensions LxWxH in mm");
    app->add_option("--max-payload", o.max_payload, "Payload limit in grams");
    app->add_option("--seed", o.seed, "Random seed");
    app->add_option("--pop", o.pop, "GA population size");
    app->add_option("--generations", o.generations, "GA generation count");
    app->add_option("--weights", o.weights, "Seven fitness weights, must sum to 1")
        ->delimiter(',')
        ->expected(0, 7);
    app->add_option("--stage", o.stage, "maxrects-only | hybrid-ga | hybrid-ga-pp");
    app->add_option("--grid-step", o.grid_step, "GA placement grid step in mm");
    app->add_option("--tau-side", o.tau_side, "Side-support contact threshold");
    app->add_option("--tau-surface", o.tau_surface, "Base-support area threshold");
    app->add_flag("--no-timing", o.no_timing,
                  "Zero runtime fields for byte-reproducible output");
}

RunConfig to_config(const CommonOpts& o) {
    RunConfig cfg;
    int l = 0, w = 0, h = 0;
    if (std::sscanf(o.pallet.c_str(), "%dx%dx%d", &l, &w, &h) != 3 || l <= 0 ||
        w <= 0 || h <= 0) {
        throw CLI::ValidationError("--pallet", "expected LxWxH with positive integers");
    }
    cfg.pallet = {l, w, h, o.max_payload};
    if (o.max_payload <= 0) {
        throw CLI::ValidationError("--max-payload", "must be positive");
    }
    cfg.ga.seed = o.seed;
    cfg.ga.population = o.pop;
    cfg.ga.generations = o.generations;
    cfg.ga.grid_step_mm = o.grid_step;
    cfg.ga.kpi.tau_side = o.tau_side;
    cfg.ga.kpi.tau_surface = o.tau_surface;
    if (!o.weights.empty()) {
        if (o.weights.size() != 7) {
            throw CLI::ValidationError("--weights", "expected exactly 7 values");
        }
        std::copy(o.weights.begin(), o.weights.end(), cfg.ga.weights.alpha.begin());
        if (!cfg.ga.weights.valid()) {
            throw CLI::ValidationError("--weights",
                                       "must be non-negative and sum to 1");
        }
    }
    if (o.stage == "maxrects-only") {
        cfg.stage = pack3d::Stage::MaxRectsOnly;
    } else if (o.stage == "hybrid-ga") {
        cfg.stage = pack3d::Stage::HybridGa;
    } else if (o.stage == "hybrid-ga-pp") {
        cfg.stage = pack3d::Stage::HybridGaPP;
    } else {
        throw CLI::ValidationError("--stage", "unknown stage '" + o.stage + "'");
    }
    cfg.post.tau_validation = 0.5;
    cfg.report_runtime = !o.no_timing;
    return cfg;
}

std::string trace_csv(const std::vector<double>& trace) {
    std::ostringstream ss;
    ss << "generation,best_fitness\n";
    char buf[32];
    for (std::size_t g = 0; g < trace.size(); ++g) {
        std::snprintf(buf, sizeof(buf), "%.9f", trace[g]);
        ss << g << ',' << buf << '\n';
    }
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layer-based pallet packing with GA refinement"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string input, order_path, out_path, trace_path, report_path;
    int total_items = -1;
    int bucket_width = 5;

    auto* pack = app.add_subcommand("pack", "Pack one order into a layout");
    pack->add_option("order", input, "Order JSON file")->required();
    add_common(pack, opts);
    pack->add_option("--out", out_path, "Layout output path (default stdout)");
    pack->add_option("--report", report_path, "Write the KPI report CSV here");
    pack->add_option("--trace", trace_path, "Write per-generation best fitness CSV");

    auto* evaluate = app.add_subcommand("evaluate", "Score an existing layout");
    evaluate->add_option("layout", input, "Layout JSON file")->required();
    evaluate->add_option("order", order_path, "Order JSON file supplying item dims")
        ->required();
    evaluate->add_option("--total-items", total_items,
                         "Override the item total used for corrected efficiency");
    add_common(evaluate, opts);
    evaluate->add_option("--out", out_path, "Report output path (default stdout)");

    auto* benchmark = app.add_subcommand("benchmark", "Run the pipeline over an order set");
    benchmark->add_option("orders", input, "Order directory or JSON file")->required();
    add_common(benchmark, opts);
    benchmark->add_option("--out", out_path, "Output directory for the CSV files")
        ->required();
    benchmark->add_option("--bucket-width", bucket_width,
                          "Item-count bucket width for the series CSV");

    auto* filter = app.add_subcommand("filter", "Keep orders meeting the study criteria");
    filter->add_option("orders", input, "Order directory or JSON file")->required();
    add_common(filter, opts);
    filter->add_option("--out", out_path, "Filtered order list path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = to_config(opts);
        if (*pack) {
            const Order order = pack3d::parse_order(slurp(input));
            const auto result = pack3d::pack_order(order, cfg);
            const std::string layout = pack3d::write_layout(result.layout);
            if (out_path.empty()) {
                std::cout << layout;
            } else {
                spit(out_path, layout);
            }
            if (!report_path.empty()) {
                spit(report_path, pack3d::write_report_csv({result.report}));
            }
            if (!trace_path.empty()) spit(trace_path, trace_csv(result.fitness_trace));
        } else if (*evaluate) {
            const auto doc = pack3d::parse_layout(slurp(input));
            const Order order = pack3d::parse_order(slurp(order_path));
            const auto items = pack3d::expand_items(order);
            const int total = total_items > 0 ? total_items : order.total_items();
            const auto report = pack3d::evaluate_layout(doc, items, total, cfg.ga.kpi);
            const std::string csv = pack3d::write_report_csv({report});
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                spit(out_path, csv);
            }
        } else if (*benchmark) {
            const auto orders = load_orders(input);
            if (orders.empty()) throw std::runtime_error("no orders found in " + input);
            const auto out = pack3d::run_benchmark(orders, cfg, bucket_width);
            fs::create_directories(out_path);
            spit((fs::path(out_path) / "per_order.csv").string(), out.per_order_csv);
            spit((fs::path(out_path) / "aggregate.csv").string(), out.aggregate_csv);
            spit((fs::path(out_path) / "buckets.csv").string(), out.bucket_csv);
        } else if (*filter) {
            const auto orders = load_orders(input);
            const auto kept = pack3d::filter_orders(orders, cfg.pallet);
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& o : kept) {
                arr.push_back(nlohmann::ordered_json::parse(pack3d::write_order(o)));
            }
            const std::string text = arr.dump(2) + "\n";
            if (out_path.empty()) {
                std::cout << text;
            } else {
                spit(out_path, text);
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

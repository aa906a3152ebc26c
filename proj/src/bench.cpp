#include "pack3d/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

#include "pack3d/order_io.hpp"

namespace pack3d {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

int default_workers() {
    if (const char* env = std::getenv("PACK3D_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct Column {
    const char* name;
    double KpiReport::*field;
};

constexpr Column kColumns[] = {
    {"abs_den", &KpiReport::abs_den},   {"rel_den", &KpiReport::rel_den},
    {"hw_ratio", &KpiReport::hw_ratio}, {"side_sup", &KpiReport::side_sup},
    {"surf_sup", &KpiReport::surf_sup}, {"cog2d", &KpiReport::cog2d},
    {"cog3d", &KpiReport::cog3d},       {"corrected_eff", &KpiReport::corrected_eff},
    {"runtime_s", &KpiReport::runtime_s},
};

}  // namespace

BenchmarkOutput run_benchmark(const std::vector<Order>& orders, const RunConfig& config,
                              int bucket_width, int workers) {
    BenchmarkOutput out;
    out.reports.resize(orders.size());

    const int pool = std::max(1, workers > 0 ? workers : default_workers());
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= orders.size()) break;
            RunConfig local = config;
            local.ga.seed = config.ga.seed + i;
            out.reports[i] = pack_order(orders[i], local).report;
        }
    };
    if (pool == 1 || orders.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    out.per_order_csv = write_report_csv(out.reports);

    // Aggregates; std is the population standard deviation (divide by n).
    std::ostringstream agg;
    agg << "# std = population standard deviation (divide by n)\n";
    agg << "stat";
    for (const auto& c : kColumns) agg << ',' << c.name;
    agg << '\n';
    const double n = static_cast<double>(out.reports.size());
    agg << "mean";
    std::vector<double> means;
    for (const auto& c : kColumns) {
        double sum = 0.0;
        for (const auto& r : out.reports) sum += r.*(c.field);
        means.push_back(n > 0 ? sum / n : 0.0);
        agg << ',' << fmt(means.back());
    }
    agg << "\nstd";
    for (std::size_t ci = 0; ci < std::size(kColumns); ++ci) {
        double ss = 0.0;
        for (const auto& r : out.reports) {
            const double d = r.*(kColumns[ci].field) - means[ci];
            ss += d * d;
        }
        agg << ',' << fmt(n > 0 ? std::sqrt(ss / n) : 0.0);
    }
    agg << '\n';
    out.aggregate_csv = agg.str();

    // Fixed-width buckets over packed-item counts, plus the order-size
    // histogram alongside.
    const int width = std::max(1, bucket_width);
    std::map<int, std::vector<const KpiReport*>> by_placed;
    std::map<int, int> by_items;
    for (const auto& r : out.reports) {
        by_placed[r.n_placed / width].push_back(&r);
        by_items[r.n_items / width] += 1;
    }
    std::ostringstream bk;
    bk << "bucket_lo,bucket_hi,n_by_placed,n_by_items";
    for (std::size_t ci = 0; ci + 1 < std::size(kColumns); ++ci) {
        bk << ",mean_" << kColumns[ci].name;
    }
    bk << '\n';
    std::map<int, bool> buckets;
    for (const auto& [b, _] : by_placed) buckets[b] = true;
    for (const auto& [b, _] : by_items) buckets[b] = true;
    for (const auto& [b, _] : buckets) {
        const auto it = by_placed.find(b);
        const std::size_t count = it != by_placed.end() ? it->second.size() : 0;
        bk << b * width << ',' << (b + 1) * width - 1 << ',' << count << ','
           << (by_items.count(b) ? by_items.at(b) : 0);
        for (std::size_t ci = 0; ci + 1 < std::size(kColumns); ++ci) {
            double sum = 0.0;
            if (it != by_placed.end()) {
                for (const auto* r : it->second) sum += r->*(kColumns[ci].field);
            }
            bk << ',' << fmt(count > 0 ? sum / static_cast<double>(count) : 0.0);
        }
        bk << '\n';
    }
    out.bucket_csv = bk.str();
    return out;
}

}  // namespace pack3d

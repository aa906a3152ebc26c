#pragma once

#include <string>
#include <vector>

#include "pack3d/pipeline.hpp"

namespace pack3d {

struct BenchmarkOutput {
    std::vector<KpiReport> reports;    // in input order
    std::string per_order_csv;
    std::string aggregate_csv;         // mean and population std per column
    std::string bucket_csv;            // KPI means bucketed by packed-item count
};

// Runs the pipeline over every order, dispatching across a bounded worker
// pool; each order gets seed = base seed + input index, and results are
// collected in input order so output is deterministic.
BenchmarkOutput run_benchmark(const std::vector<Order>& orders, const RunConfig& config,
                              int bucket_width = 5, int workers = 0);

}  // namespace pack3d

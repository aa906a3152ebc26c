#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pack3d/geometry.hpp"
#include "pack3d/kpi.hpp"

namespace pack3d {

struct Article {
    Item item;  // prototype; id is the article id
    int quantity = 1;
};

struct Order {
    std::string order_id;
    std::vector<Article> articles;

    int total_items() const;
};

struct LayoutMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
};

struct LayoutPlacement {
    std::string id;
    int x = 0, y = 0, z = 0;
    Rotation rot = Rotation::Deg0;
};

struct LayoutDocument {
    std::string order_id;
    Pallet pallet;
    std::vector<LayoutPlacement> placements;
    std::vector<std::string> unplaced;
    LayoutMeta meta;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Order schema:
// { "order_id": str, "articles": [ { "id": str, "length_mm": int,
//   "width_mm": int, "height_mm": int, "weight_g": int, "quantity": int } ] }
Order parse_order(const std::string& text);

// Expands quantities into item instances with ids "articleId#k", k from 1.
std::vector<Item> expand_items(const Order& order);

// Keeps an order iff it has >= 5 distinct footprints and an estimated average
// stacking height of 150-190 cm, or >= 9 footprints at 120-150 cm. The height
// estimate is the volumetric lower bound, total item volume / (L*W).
std::vector<Order> filter_orders(const std::vector<Order>& orders, const Pallet& pallet);

std::string write_order(const Order& order);

std::string write_layout(const LayoutDocument& doc);
LayoutDocument parse_layout(const std::string& text);

std::string report_csv_header();
std::string report_csv_row(const KpiReport& report);
std::string write_report_csv(const std::vector<KpiReport>& reports);
std::string write_report_json(const std::vector<KpiReport>& reports);

}  // namespace pack3d

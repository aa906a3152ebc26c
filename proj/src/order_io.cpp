#include "pack3d/order_io.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pack3d {

using ordered_json = nlohmann::ordered_json;

namespace {

int require_positive_int(const ordered_json& node, const char* field,
                         const std::string& context) {
    if (!node.contains(field) || !node[field].is_number_integer()) {
        throw ParseError("missing or non-integer field '" + std::string(field) +
                         "' in " + context);
    }
    const auto v = node[field].get<std::int64_t>();
    if (v <= 0) {
        throw ParseError("field '" + std::string(field) + "' must be positive in " +
                         context);
    }
    return static_cast<int>(v);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

int Order::total_items() const {
    int n = 0;
    for (const auto& a : articles) n += a.quantity;
    return n;
}

Order parse_order(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed order document: ") + e.what());
    }
    if (!j.contains("order_id") || !j["order_id"].is_string()) {
        throw ParseError("missing or non-string field 'order_id'");
    }
    if (!j.contains("articles") || !j["articles"].is_array()) {
        throw ParseError("missing or non-array field 'articles'");
    }
    Order order;
    order.order_id = j["order_id"].get<std::string>();
    std::set<std::string> seen;
    for (const auto& a : j["articles"]) {
        if (!a.contains("id") || !a["id"].is_string()) {
            throw ParseError("missing or non-string field 'id' in article");
        }
        Article article;
        article.item.id = a["id"].get<std::string>();
        const std::string ctx = "article '" + article.item.id + "'";
        if (!seen.insert(article.item.id).second) {
            throw ParseError("duplicate article id in " + ctx);
        }
        article.item.length_mm = require_positive_int(a, "length_mm", ctx);
        article.item.width_mm = require_positive_int(a, "width_mm", ctx);
        article.item.height_mm = require_positive_int(a, "height_mm", ctx);
        if (!a.contains("weight_g") || !a["weight_g"].is_number_integer()) {
            throw ParseError("missing or non-integer field 'weight_g' in " + ctx);
        }
        article.item.mass_g = a["weight_g"].get<std::int64_t>();
        if (article.item.mass_g < 0) {
            throw ParseError("field 'weight_g' must be non-negative in " + ctx);
        }
        article.quantity = require_positive_int(a, "quantity", ctx);
        order.articles.push_back(std::move(article));
    }
    if (order.total_items() < 1) {
        throw ParseError("order '" + order.order_id + "' contains no items");
    }
    return order;
}

std::vector<Item> expand_items(const Order& order) {
    std::vector<Item> items;
    items.reserve(static_cast<std::size_t>(order.total_items()));
    for (const auto& a : order.articles) {
        for (int k = 1; k <= a.quantity; ++k) {
            Item item = a.item;
            item.id = a.item.id + "#" + std::to_string(k);
            items.push_back(std::move(item));
        }
    }
    return items;
}

std::vector<Order> filter_orders(const std::vector<Order>& orders, const Pallet& pallet) {
    std::vector<Order> kept;
    const double base = static_cast<double>(pallet.length_mm) * pallet.width_mm;
    for (const auto& order : orders) {
        std::set<std::pair<int, int>> footprints;
        double volume = 0.0;
        for (const auto& a : order.articles) {
            const int lo = std::min(a.item.length_mm, a.item.width_mm);
            const int hi = std::max(a.item.length_mm, a.item.width_mm);
            footprints.insert({lo, hi});
            volume += static_cast<double>(a.item.volume_mm3()) * a.quantity;
        }
        if (base <= 0.0) continue;
        const double est_height_cm = volume / base / 10.0;
        const auto n = footprints.size();
        const bool tall_band = n >= 5 && est_height_cm >= 150.0 && est_height_cm <= 190.0;
        const bool wide_band = n >= 9 && est_height_cm >= 120.0 && est_height_cm <= 150.0;
        if (tall_band || wide_band) kept.push_back(order);
    }
    return kept;
}

std::string write_order(const Order& order) {
    ordered_json j;
    j["order_id"] = order.order_id;
    j["articles"] = ordered_json::array();
    for (const auto& a : order.articles) {
        ordered_json ja;
        ja["id"] = a.item.id;
        ja["length_mm"] = a.item.length_mm;
        ja["width_mm"] = a.item.width_mm;
        ja["height_mm"] = a.item.height_mm;
        ja["weight_g"] = a.item.mass_g;
        ja["quantity"] = a.quantity;
        j["articles"].push_back(std::move(ja));
    }
    return j.dump(2) + "\n";
}

std::string write_layout(const LayoutDocument& doc) {
    ordered_json j;
    j["order_id"] = doc.order_id;
    j["pallet"] = {{"L", doc.pallet.length_mm},
                   {"W", doc.pallet.width_mm},
                   {"H", doc.pallet.height_mm},
                   {"M_max", doc.pallet.max_payload_g}};
    j["placements"] = ordered_json::array();
    for (const auto& p : doc.placements) {
        ordered_json jp;
        jp["id"] = p.id;
        jp["x"] = p.x;
        jp["y"] = p.y;
        jp["z"] = p.z;
        jp["rot"] = p.rot == Rotation::Deg90 ? 90 : 0;
        j["placements"].push_back(std::move(jp));
    }
    j["unplaced"] = doc.unplaced;
    j["meta"] = {{"seed", doc.meta.seed}, {"config_hash", doc.meta.config_hash}};
    return j.dump(2) + "\n";
}

LayoutDocument parse_layout(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed layout document: ") + e.what());
    }
    LayoutDocument doc;
    try {
        doc.order_id = j.at("order_id").get<std::string>();
        const auto& jp = j.at("pallet");
        doc.pallet.length_mm = jp.at("L").get<int>();
        doc.pallet.width_mm = jp.at("W").get<int>();
        doc.pallet.height_mm = jp.at("H").get<int>();
        doc.pallet.max_payload_g = jp.at("M_max").get<std::int64_t>();
        for (const auto& p : j.at("placements")) {
            LayoutPlacement lp;
            lp.id = p.at("id").get<std::string>();
            lp.x = p.at("x").get<int>();
            lp.y = p.at("y").get<int>();
            lp.z = p.at("z").get<int>();
            const int rot = p.at("rot").get<int>();
            if (rot != 0 && rot != 90) throw ParseError("field 'rot' must be 0 or 90");
            lp.rot = rot == 90 ? Rotation::Deg90 : Rotation::Deg0;
            doc.placements.push_back(std::move(lp));
        }
        doc.unplaced = j.at("unplaced").get<std::vector<std::string>>();
        if (j.contains("meta")) {
            doc.meta.seed = j["meta"].value("seed", std::uint64_t{0});
            doc.meta.config_hash = j["meta"].value("config_hash", std::string{});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid layout document: ") + e.what());
    }
    return doc;
}

std::string report_csv_header() {
    return "order_id,n_items,n_placed,abs_den,rel_den,hw_ratio,side_sup,"
           "surf_sup,cog2d,cog3d,corrected_eff,runtime_s";
}

std::string report_csv_row(const KpiReport& r) {
    std::ostringstream out;
    out << r.order_id << ',' << r.n_items << ',' << r.n_placed << ','
        << fmt(r.abs_den) << ',' << fmt(r.rel_den) << ',' << fmt(r.hw_ratio) << ','
        << fmt(r.side_sup) << ',' << fmt(r.surf_sup) << ',' << fmt(r.cog2d) << ','
        << fmt(r.cog3d) << ',' << fmt(r.corrected_eff) << ',' << fmt(r.runtime_s);
    return out.str();
}

std::string write_report_csv(const std::vector<KpiReport>& reports) {
    std::ostringstream out;
    out << report_csv_header() << '\n';
    for (const auto& r : reports) out << report_csv_row(r) << '\n';
    return out.str();
}

std::string write_report_json(const std::vector<KpiReport>& reports) {
    ordered_json j = ordered_json::array();
    for (const auto& r : reports) {
        j.push_back({{"order_id", r.order_id},
                     {"n_items", r.n_items},
                     {"n_placed", r.n_placed},
                     {"abs_den", r.abs_den},
                     {"rel_den", r.rel_den},
                     {"hw_ratio", r.hw_ratio},
                     {"side_sup", r.side_sup},
                     {"surf_sup", r.surf_sup},
                     {"cog2d", r.cog2d},
                     {"cog3d", r.cog3d},
                     {"corrected_eff", r.corrected_eff},
                     {"runtime_s", r.runtime_s}});
    }
    return j.dump(2) + "\n";
}

}  // namespace pack3d

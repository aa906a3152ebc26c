#include <string>

#include "doctest.h"
#include "pack3d/order_io.hpp"

using namespace pack3d;

namespace {

std::string article_json(const std::string& id, int l, int w, int h, int mass,
                         int qty) {
    return "{\"id\":\"" + id + "\",\"length_mm\":" + std::to_string(l) +
           ",\"width_mm\":" + std::to_string(w) +
           ",\"height_mm\":" + std::to_string(h) +
           ",\"weight_g\":" + std::to_string(mass) +
           ",\"quantity\":" + std::to_string(qty) + "}";
}

Order make_order(const std::string& id, std::vector<Article> articles) {
    Order o;
    o.order_id = id;
    o.articles = std::move(articles);
    return o;
}

}  // namespace

TEST_CASE("parse_order accepts a minimal order") {
    const Order o = parse_order(R"({"order_id":"o1","articles":[)" +
                                article_json("a", 100, 200, 300, 500, 1) + "]}");
    CHECK(o.order_id == "o1");
    REQUIRE(o.articles.size() == 1);
    CHECK(o.articles[0].item.length_mm == 100);
    CHECK(o.articles[0].item.mass_g == 500);
    CHECK(o.total_items() == 1);
}

TEST_CASE("expand_items derives one instance per unit of quantity") {
    const Order o = parse_order(R"({"order_id":"o1","articles":[)" +
                                article_json("a", 100, 200, 300, 500, 3) + "]}");
    const auto items = expand_items(o);
    REQUIRE(items.size() == 3);
    CHECK(items[0].id == "a#1");
    CHECK(items[1].id == "a#2");
    CHECK(items[2].id == "a#3");
}

TEST_CASE("parse_order rejects bad input naming the offending field") {
    CHECK_THROWS_AS(parse_order("not json"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_order(R"({"articles":[]})"),
        doctest::Contains("order_id"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_order(R"({"order_id":"o","articles":[)" +
                    article_json("a", 100, 200, 0, 500, 1) + "]}"),
        doctest::Contains("height_mm"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_order(R"({"order_id":"o","articles":[)" +
                    article_json("a", 100, 200, 300, -5, 1) + "]}"),
        doctest::Contains("weight_g"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_order(R"({"order_id":"o","articles":[)" +
                    article_json("a", 100, 200, 300, 10, 1) + "," +
                    article_json("a", 50, 50, 50, 10, 1) + "]}"),
        doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_AS(parse_order(R"({"order_id":"o","articles":[]})"), ParseError);
}

TEST_CASE("filter_orders applies the footprint and height bands") {
    const Pallet pallet{1200, 800, 2000, 1'000'000};
    const double base = 1200.0 * 800.0;

    // Builds an order with n distinct footprints whose volume sums to the
    // target estimated stacking height (in cm).
    const auto with_height = [&](const std::string& id, int footprints,
                                 double est_cm) {
        Order o;
        o.order_id = id;
        const double target_volume = est_cm * 10.0 * base;
        const double per = target_volume / footprints;
        for (int i = 0; i < footprints; ++i) {
            Article a;
            a.item.id = "a" + std::to_string(i);
            a.item.length_mm = 100 + i;  // each footprint distinct
            a.item.width_mm = 100;
            a.item.height_mm = std::max(
                1, static_cast<int>(per / (a.item.length_mm * a.item.width_mm)));
            a.item.mass_g = 100;
            a.quantity = 1;
            o.articles.push_back(a);
        }
        return o;
    };

    const Order few = with_height("few", 2, 170);
    const Order tall_band = with_height("tall", 6, 170);
    const Order wide_band = with_height("wide", 9, 130);
    const Order low = with_height("low", 6, 100);
    const Order mid_gap = with_height("gap", 6, 130);  // 5-8 footprints need 150-190

    const auto kept = filter_orders({few, tall_band, wide_band, low, mid_gap}, pallet);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].order_id == "tall");
    CHECK(kept[1].order_id == "wide");

    // Idempotent and order-preserving.
    const auto again = filter_orders(kept, pallet);
    REQUIRE(again.size() == 2);
    CHECK(again[0].order_id == "tall");
    CHECK(again[1].order_id == "wide");
}

TEST_CASE("order serialization round-trips") {
    Order o = make_order("rt", {});
    Article a;
    a.item = {"box", 120, 90, 60, 450};
    a.quantity = 4;
    o.articles.push_back(a);
    const std::string text = write_order(o);
    const Order back = parse_order(text);
    CHECK(back.order_id == o.order_id);
    REQUIRE(back.articles.size() == 1);
    CHECK(back.articles[0].item.id == "box");
    CHECK(back.articles[0].item.length_mm == 120);
    CHECK(back.articles[0].quantity == 4);
    CHECK(write_order(back) == text);
}

TEST_CASE("layout serialization round-trips and is byte-stable") {
    LayoutDocument doc;
    doc.order_id = "o9";
    doc.pallet = {1200, 800, 2000, 900000};
    doc.placements.push_back({"a#1", 0, 0, 0, Rotation::Deg0});
    doc.placements.push_back({"b#1", 100, 50, 0, Rotation::Deg90});
    doc.unplaced = {"c#1"};
    doc.meta.seed = 42;
    doc.meta.config_hash = "deadbeef";

    const std::string text = write_layout(doc);
    CHECK(text == write_layout(doc));  // deterministic bytes

    const LayoutDocument back = parse_layout(text);
    CHECK(back.order_id == doc.order_id);
    CHECK(back.pallet.length_mm == 1200);
    CHECK(back.pallet.max_payload_g == 900000);
    REQUIRE(back.placements.size() == 2);
    CHECK(back.placements[1].id == "b#1");
    CHECK(back.placements[1].rot == Rotation::Deg90);
    CHECK(back.unplaced == doc.unplaced);
    CHECK(back.meta.seed == 42);
    CHECK(back.meta.config_hash == "deadbeef");
    CHECK(write_layout(back) == text);
}

TEST_CASE("layout with no placements is still a valid document") {
    LayoutDocument doc;
    doc.order_id = "empty";
    doc.pallet = {1200, 800, 2000, 900000};
    const LayoutDocument back = parse_layout(write_layout(doc));
    CHECK(back.placements.empty());
    CHECK(back.unplaced.empty());
}

TEST_CASE("parse_layout rejects malformed documents") {
    CHECK_THROWS_AS(parse_layout("{"), ParseError);
    CHECK_THROWS_AS(parse_layout(R"({"order_id":"x"})"), ParseError);
    CHECK_THROWS_AS(
        parse_layout(
            R"({"order_id":"x","pallet":{"L":10,"W":10,"H":10,"M_max":10},)"
            R"("placements":[{"id":"a","x":0,"y":0,"z":0,"rot":45}],"unplaced":[]})"),
        ParseError);
}

TEST_CASE("report CSV has the fixed column set and one row per order") {
    KpiReport r1;
    r1.order_id = "o1";
    r1.n_items = 10;
    r1.n_placed = 8;
    r1.abs_den = 0.5;
    KpiReport r2;
    r2.order_id = "o2";
    KpiReport r3;
    r3.order_id = "o3";
    const std::string csv = write_report_csv({r1, r2, r3});
    CHECK(csv.find("order_id,n_items,n_placed,abs_den,rel_den,hw_ratio,side_sup,"
                   "surf_sup,cog2d,cog3d,corrected_eff,runtime_s") == 0);
    int rows = 0;
    for (char c : csv) rows += c == '\n';
    CHECK(rows == 4);  // header + 3 data rows
    CHECK(csv.find("o1,10,8,0.500000") != std::string::npos);

    const std::string json = write_report_json({r1, r2, r3});
    CHECK(json.find("\"order_id\": \"o2\"") != std::string::npos);
}

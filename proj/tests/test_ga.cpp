#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pack3d/ga.hpp"

using namespace pack3d;

namespace {

const Pallet kPallet{1200, 800, 2000, 1'000'000};

std::vector<SuperItem> random_units(std::mt19937_64& rng, int n, int dim_lo = 80,
                                    int dim_hi = 500, int hgt_hi = 400) {
    std::vector<Item> items;
    std::uniform_int_distribution<int> dim(dim_lo, dim_hi);
    std::uniform_int_distribution<int> hgt(dim_lo, hgt_hi);
    for (int i = 0; i < n; ++i) {
        items.push_back({"u" + std::to_string(i), dim(rng), dim(rng), hgt(rng), 100});
    }
    return build_superitems(items, kPallet);
}

GaContext context(int base_top = 0) {
    return {kPallet, base_top, kPallet.max_payload_g};
}

std::unordered_set<std::string> ids_of(std::span<const SuperItem> units) {
    std::unordered_set<std::string> out;
    for (const auto& u : units) {
        for (const auto& m : u.members) out.insert(m.item.id);
    }
    return out;
}

std::set<int> units_of(const Chromosome& c) {
    std::set<int> out;
    for (const auto& layer : c) {
        for (const auto& m : layer.members) out.insert(m.unit);
    }
    return out;
}

bool structurally_equal(const Chromosome& a, const Chromosome& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].base_z != b[i].base_z || a[i].height != b[i].height ||
            a[i].members.size() != b[i].members.size())
            return false;
        for (std::size_t j = 0; j < a[i].members.size(); ++j) {
            const auto& ma = a[i].members[j];
            const auto& mb = b[i].members[j];
            if (ma.unit != mb.unit || ma.x != mb.x || ma.y != mb.y || ma.rot != mb.rot)
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("adaptive schedules reproduce the published waypoints exactly") {
    CHECK(tournament_size(0, 50, 100) == 10);
    CHECK(tournament_size(50, 50, 100) == 40);
    CHECK(tournament_size(25, 50, 100) == 25);
    CHECK(tournament_size(0, 50, 10) == 3);
    CHECK(tournament_size(50, 50, 10) == 4);

    CHECK(crossover_prob(0, 50) == doctest::Approx(0.5));
    CHECK(crossover_prob(50, 50) == doctest::Approx(0.55));
    CHECK(crossover_prob(25, 50) == doctest::Approx(0.525));

    CHECK(mutation_prob(0, 50) == doctest::Approx(0.35));
    CHECK(mutation_prob(50, 50) == doctest::Approx(0.175));
    CHECK(mutation_prob(25, 50) == doctest::Approx(0.2625));
}

TEST_CASE("realize offsets layer z-levels by the base height") {
    std::mt19937_64 rng(41);
    const auto units = random_units(rng, 6);
    GaConfig cfg;
    cfg.population = 6;
    const auto ctx = context();
    std::mt19937_64 init_rng(1);
    const auto pop = initialize_population(units, ctx, cfg, init_rng);
    REQUIRE_FALSE(pop.empty());
    const auto& c = pop[0].chromosome;
    const auto at0 = realize(c, units, 0);
    const auto at500 = realize(c, units, 500);
    REQUIRE(at0.size() == at500.size());
    for (std::size_t i = 0; i < at0.size(); ++i) {
        CHECK(at500[i].z0() == at0[i].z0() + 500);
        CHECK(at500[i].x0() == at0[i].x0());
    }
}

TEST_CASE("check_chromosome enforces the layer invariants") {
    std::vector<Item> items{{"a", 400, 300, 200, 100}, {"b", 300, 300, 250, 100}};
    const auto units = build_superitems(items, kPallet);
    REQUIRE(units.size() == 2);
    const auto ctx = context();

    Chromosome good;
    good.push_back({0, 250, {{0, 0, 0, Rotation::Deg0}, {1, 500, 0, Rotation::Deg0}}});
    CHECK(check_chromosome(good, units, ctx));

    Chromosome overlap = good;
    overlap[0].members[1].x = 100;  // collides with unit 0
    CHECK_FALSE(check_chromosome(overlap, units, ctx));

    Chromosome bad_z = good;
    bad_z[0].base_z = 10;
    CHECK_FALSE(check_chromosome(bad_z, units, ctx));

    Chromosome bad_height = good;
    bad_height[0].height = 200;
    CHECK_FALSE(check_chromosome(bad_height, units, ctx));

    Chromosome dup;
    dup.push_back({0, 200, {{0, 0, 0, Rotation::Deg0}}});
    dup.push_back({200, 200, {{0, 0, 0, Rotation::Deg0}}});
    CHECK_FALSE(check_chromosome(dup, units, ctx));

    GaContext tight = ctx;
    tight.base_top_z = kPallet.height_mm - 100;  // only 100 mm left
    CHECK_FALSE(check_chromosome(good, units, tight));

    GaContext heavy = ctx;
    heavy.mass_budget_g = 150;
    CHECK_FALSE(check_chromosome(good, units, heavy));
}

TEST_CASE("initial population is valid and covers the strategy combinations") {
    std::mt19937_64 rng(42);
    const auto units = random_units(rng, 12);
    GaConfig cfg;
    cfg.population = 6;
    const auto ctx = context();
    std::mt19937_64 init_rng(7);
    const auto pop = initialize_population(units, ctx, cfg, init_rng);
    REQUIRE(pop.size() == 6);
    for (const auto& e : pop) CHECK(check_chromosome(e.chromosome, units, ctx));
}

TEST_CASE("a single-unit residual yields identical single-layer chromosomes") {
    const std::vector<Item> one{{"solo", 300, 200, 150, 100}};
    const auto units = build_superitems(one, kPallet);
    GaConfig cfg;
    cfg.population = 8;
    const auto ctx = context();
    std::mt19937_64 rng(9);
    const auto pop = initialize_population(units, ctx, cfg, rng);
    REQUIRE(pop.size() == 8);
    for (const auto& e : pop) {
        REQUIRE(e.chromosome.size() == 1);
        REQUIRE(e.chromosome[0].members.size() == 1);
        CHECK(structurally_equal(e.chromosome, pop[0].chromosome));
    }
}

TEST_CASE("crossover of identical parents reproduces the parent") {
    std::mt19937_64 rng(43);
    const auto units = random_units(rng, 10);
    GaConfig cfg;
    cfg.population = 6;
    const auto ctx = context();
    std::mt19937_64 init_rng(3);
    const auto pop = initialize_population(units, ctx, cfg, init_rng);
    const Evaluated parent{pop[0].chromosome, 0.5};
    for (int i = 0; i < 20; ++i) {
        const Chromosome child = crossover(parent, parent, units, ctx, cfg, rng);
        CHECK(structurally_equal(child, parent.chromosome));
    }
}

TEST_CASE("crossover children are valid and never duplicate or invent units") {
    std::mt19937_64 rng(44);
    GaConfig cfg;
    cfg.population = 6;
    const auto ctx = context();
    for (int round = 0; round < 30; ++round) {
        const auto units = random_units(rng, 14);
        std::mt19937_64 init_rng(round);
        auto pop = initialize_population(units, ctx, cfg, init_rng);
        REQUIRE(pop.size() >= 2);
        pop[0].fitness = 0.4;
        pop[1].fitness = 0.6;
        const Chromosome child = crossover(pop[0], pop[1], units, ctx, cfg, rng);
        CHECK(check_chromosome(child, units, ctx));

        // Closure: members come from the union of the parents' units.
        std::set<int> allowed = units_of(pop[0].chromosome);
        for (int u : units_of(pop[1].chromosome)) allowed.insert(u);
        for (int u : units_of(child)) CHECK(allowed.count(u) == 1);
    }
}

TEST_CASE("mutation preserves the chromosome invariants") {
    std::mt19937_64 rng(45);
    GaConfig cfg;
    cfg.population = 6;
    const auto ctx = context();
    for (int round = 0; round < 30; ++round) {
        const auto units = random_units(rng, 12);
        std::mt19937_64 init_rng(round * 7 + 1);
        const auto pop = initialize_population(units, ctx, cfg, init_rng);
        for (const auto& e : pop) {
            const std::set<int> before = units_of(e.chromosome);
            const Chromosome mutated = mutate(e.chromosome, units, ctx, cfg, rng);
            CHECK(check_chromosome(mutated, units, ctx));
            CHECK(units_of(mutated) == before);  // mutation rearranges, never drops
        }
    }
}

TEST_CASE("mutating a single-layer single-item chromosome cannot break it") {
    const std::vector<Item> one{{"solo", 300, 200, 150, 100}};
    const auto units = build_superitems(one, kPallet);
    const auto ctx = context();
    GaConfig cfg;
    Chromosome c;
    c.push_back({0, 150, {{0, 600, 400, Rotation::Deg0}}});
    std::mt19937_64 rng(46);
    for (int i = 0; i < 50; ++i) {
        c = mutate(c, units, ctx, cfg, rng);
        CHECK(check_chromosome(c, units, ctx));
        REQUIRE(c.size() == 1);
        REQUIRE(c[0].members.size() == 1);
    }
}

TEST_CASE("evolve validates its configuration") {
    std::mt19937_64 rng(47);
    const auto units = random_units(rng, 4);
    GaConfig cfg;
    cfg.population = 1;
    CHECK_THROWS_AS(evolve(units, context(), cfg), std::invalid_argument);
    cfg.population = 4;
    cfg.generations = 0;
    CHECK_THROWS_AS(evolve(units, context(), cfg), std::invalid_argument);
    cfg.generations = 1;
    cfg.weights.alpha.fill(0.5);
    CHECK_THROWS_AS(evolve(units, context(), cfg), std::invalid_argument);
}

TEST_CASE("a trivial run returns the single-unit chromosome") {
    const std::vector<Item> one{{"solo", 300, 200, 150, 100}};
    const auto units = build_superitems(one, kPallet);
    GaConfig cfg;
    cfg.population = 2;
    cfg.generations = 1;
    const auto result = evolve(units, context(), cfg);
    REQUIRE(result.best.size() == 1);
    REQUIRE(result.best[0].members.size() == 1);
    CHECK(result.trace.size() == 1);
    CHECK(result.best_fitness > 0.0);
}

TEST_CASE("the best-fitness trace is non-decreasing") {
    std::mt19937_64 rng(48);
    for (int round = 0; round < 5; ++round) {
        const auto units = random_units(rng, 15);
        GaConfig cfg;
        cfg.population = 12;
        cfg.generations = 8;
        cfg.seed = static_cast<std::uint64_t>(round);
        const auto result = evolve(units, context(), cfg);
        REQUIRE(result.trace.size() == 8);
        for (std::size_t g = 1; g < result.trace.size(); ++g) {
            CHECK(result.trace[g] >= result.trace[g - 1]);
        }
        CHECK(result.best_fitness == result.trace.back());
    }
}

TEST_CASE("evolve is deterministic for a fixed seed") {
    std::mt19937_64 rng(49);
    const auto units = random_units(rng, 12);
    GaConfig cfg;
    cfg.population = 10;
    cfg.generations = 5;
    cfg.seed = 1234;
    const auto a = evolve(units, context(), cfg);
    const auto b = evolve(units, context(), cfg);
    CHECK(structurally_equal(a.best, b.best));
    CHECK(a.trace == b.trace);

    cfg.seed = 1235;
    const auto c = evolve(units, context(), cfg);
    // A different seed is allowed to find the same layout, but the traces of
    // two equal seeds must match exactly, which we already asserted.
    CHECK(c.trace.size() == a.trace.size());
}

TEST_CASE("merge_with_base rebases layers and re-validates each item") {
    const std::vector<Item> items{{"low", 400, 300, 200, 100},
                                  {"high", 400, 300, 1900, 100}};
    const auto units = build_superitems(items, kPallet);
    REQUIRE(units.size() == 2);
    const std::size_t low = units[0].members[0].item.id == "low" ? 0 : 1;
    const std::size_t high = 1 - low;

    std::vector<PackedItem> base{{{"base", 1200, 800, 400, 1000},
                                  {0, 0, 0, Rotation::Deg0}}};

    // Empty chromosome: merged result is the base solution.
    const auto none = merge_with_base(base, {}, units, kPallet);
    CHECK(none.placed.size() == 1);
    CHECK(none.unplaced.empty());

    // A 200-tall layer on top of the 400-tall base lands at z = 400.
    Chromosome c;
    c.push_back({0, units[low].height_mm,
                 {{static_cast<int>(low), 0, 0, Rotation::Deg0}}});
    const auto merged = merge_with_base(base, c, units, kPallet);
    REQUIRE(merged.placed.size() == 2);
    CHECK(merged.placed[1].z0() == 400);
    CHECK(merged.unplaced.empty());

    // A 1900-tall item exceeds H after rebasing and moves to unplaced.
    Chromosome tall;
    tall.push_back({0, units[high].height_mm,
                    {{static_cast<int>(high), 0, 0, Rotation::Deg0}}});
    const auto rejected = merge_with_base(base, tall, units, kPallet);
    CHECK(rejected.placed.size() == 1);
    REQUIRE(rejected.unplaced.size() == 1);
    CHECK(rejected.unplaced[0].id == "high");
}

TEST_CASE("merge_with_base enforces the payload budget") {
    Pallet pallet = kPallet;
    pallet.max_payload_g = 1500;
    const std::vector<Item> items{{"x", 400, 300, 200, 600}};
    const auto units = build_superitems(items, pallet);
    std::vector<PackedItem> base{{{"base", 1200, 800, 400, 1000},
                                  {0, 0, 0, Rotation::Deg0}}};
    Chromosome c;
    c.push_back({0, 200, {{0, 0, 0, Rotation::Deg0}}});
    const auto merged = merge_with_base(base, c, units, pallet);
    CHECK(merged.placed.size() == 1);  // 1000 + 600 > 1500
    REQUIRE(merged.unplaced.size() == 1);
    CHECK(merged.unplaced[0].id == "x");
}

TEST_CASE("chromosome_fitness rewards covering the residual set") {
    const std::vector<Item> items{{"a", 400, 300, 200, 100},
                                  {"b", 300, 300, 200, 100}};
    const auto units = build_superitems(items, kPallet);
    GaConfig cfg;
    const auto ctx = context();
    const auto residual = ids_of(units);

    Chromosome both;
    both.push_back({0, 200, {{0, 0, 0, Rotation::Deg0}, {1, 500, 0, Rotation::Deg0}}});
    Chromosome only_one;
    only_one.push_back({0, 200, {{0, 0, 0, Rotation::Deg0}}});
    CHECK(chromosome_fitness(both, units, ctx, cfg, residual) >
          chromosome_fitness(only_one, units, ctx, cfg, residual));
}

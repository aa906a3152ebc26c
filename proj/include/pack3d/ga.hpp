#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_set>
#include <vector>

#include "pack3d/constructive.hpp"
#include "pack3d/kpi.hpp"
#include "pack3d/superitems.hpp"

namespace pack3d {

// A chromosome is an ordered list of layers over the residual units; base
// z-levels are prefix sums of preceding layer heights.
using Chromosome = std::vector<Layer>;

struct GaConfig {
    int population = 100;
    int generations = 50;
    double elite_rate = 0.10;
    std::uint64_t seed = 0;
    int grid_step_mm = 25;
    KpiWeights weights = KpiWeights::uniform();
    KpiParams kpi;
};

// Packing context the chromosomes must respect: the pallet base, the height
// remaining above the constructive solution, and the leftover payload budget.
struct GaContext {
    Pallet pallet;
    int base_top_z = 0;
    std::int64_t mass_budget_g = 0;

    int height_budget() const { return pallet.height_mm - base_top_z; }
};

struct Evaluated {
    Chromosome chromosome;
    double fitness = 0.0;
};

using Population = std::vector<Evaluated>;

// Adaptive schedules.
int tournament_size(int g, int total_generations, int population);
double crossover_prob(int g, int total_generations);
double mutation_prob(int g, int total_generations);

// Member placements of all layers, decomposed to items, with layer z-levels
// offset by base_z.
std::vector<PackedItem> realize(const Chromosome& chromosome,
                                std::span<const SuperItem> units, int base_z);

// Structural invariants: prefix-sum z-levels, layer heights, in-bounds
// non-overlapping 2D members, unique units, height and payload budgets.
bool check_chromosome(const Chromosome& chromosome, std::span<const SuperItem> units,
                      const GaContext& ctx);

double chromosome_fitness(const Chromosome& chromosome,
                          std::span<const SuperItem> units, const GaContext& ctx,
                          const GaConfig& config,
                          const std::unordered_set<std::string>& residual_ids);

Population initialize_population(std::span<const SuperItem> units, const GaContext& ctx,
                                 const GaConfig& config, std::mt19937_64& rng);

// One-point crossover with layer preservation; falls back to a copy of the
// fitter parent when the child would break the height budget.
Chromosome crossover(const Evaluated& parent_a, const Evaluated& parent_b,
                     std::span<const SuperItem> units, const GaContext& ctx,
                     const GaConfig& config, std::mt19937_64& rng);

// Applies one KPI-aligned operator chosen uniformly; returns the input
// unchanged when the operator cannot keep the invariants.
Chromosome mutate(const Chromosome& chromosome, std::span<const SuperItem> units,
                  const GaContext& ctx, const GaConfig& config, std::mt19937_64& rng);

struct EvolveResult {
    Chromosome best;
    double best_fitness = 0.0;
    std::vector<double> trace;  // best-ever fitness after each generation
};

EvolveResult evolve(std::span<const SuperItem> units, const GaContext& ctx,
                    const GaConfig& config);

struct MergeResult {
    std::vector<PackedItem> placed;  // existing placements plus accepted GA items
    std::vector<Item> unplaced;      // residual items that failed validation
};

// Rebase the best chromosome on top of the constructive solution and
// re-validate containment, overlap, and payload item by item.
MergeResult merge_with_base(std::vector<PackedItem> base_placed,
                            const Chromosome& best, std::span<const SuperItem> units,
                            const Pallet& pallet);

}  // namespace pack3d

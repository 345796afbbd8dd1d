#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "textprune/scoring.hpp"

namespace textprune {

enum class PruneStrategy { adaptive, stratified, furthest, closest, random };

struct PruneConfig {
    double rate = 0.5;                  // fraction removed, 0 < r < 1
    std::uint32_t strata = 100;         // k
    std::size_t size_threshold = 1500;  // adaptive dispatch boundary
    PruneStrategy strategy = PruneStrategy::adaptive;
    std::uint64_t seed = 0;
};

// One of k equal-width score intervals. A score s falls into stratum
// floor((s - min) / width) with width = (max - min) / k, clamped so the
// top interval is closed at max. Members are doc ids, ascending.
struct Stratum {
    std::uint32_t index = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::uint32_t> members;
};

struct StratumTake {
    std::uint32_t index = 0;
    std::size_t population = 0;
    std::size_t taken = 0;
};

struct CoresetSelection {
    std::vector<std::uint32_t> kept;  // sorted ascending
    PruneStrategy strategy_used = PruneStrategy::adaptive;
    std::vector<StratumTake> per_stratum;  // stratified runs only, one per stratum
    std::size_t budget = 0;
};

// (1 - rate) * n with results within 1e-9 of an integer snapped to it, so
// mathematically exact products are not perturbed by floating point.
double post_prune_size(double rate, std::size_t n);

// Coreset budget: floor of the snapped post-prune size.
std::size_t prune_budget(double rate, std::size_t n);

std::vector<Stratum> build_strata(const ScoreSet& scores, std::uint32_t k);

// Dataset-size-adaptive pruning: dispatches to the stratified branch when
// the post-prune size exceeds cfg.size_threshold, to keep-furthest
// otherwise. Non-adaptive strategies force the named branch. Stage seeds
// are derived from cfg.seed per strategy name.
CoresetSelection prune(const ScoreSet& scores, const PruneConfig& cfg);

CoresetSelection prune_furthest(const ScoreSet& scores, std::size_t budget);
CoresetSelection prune_closest(const ScoreSet& scores, std::size_t budget);
CoresetSelection prune_stratified(const ScoreSet& scores, std::size_t budget, std::uint32_t k,
                                  std::uint64_t seed);
CoresetSelection prune_random(const ScoreSet& scores, std::size_t budget, std::uint64_t seed);

const char* strategy_name(PruneStrategy s);
PruneStrategy parse_strategy(std::string_view name);

}  // namespace textprune

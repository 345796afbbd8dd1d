#include "textprune/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "textprune/errors.hpp"
#include "textprune/rng.hpp"

namespace textprune {
namespace {

void check_budget(const ScoreSet& scores, std::size_t budget) {
    if (budget < 1 || budget > scores.size())
        throw std::invalid_argument("budget " + std::to_string(budget) + " out of range [1, " +
                                    std::to_string(scores.size()) + "]");
}

// Doc ids ordered by score with deterministic tie-breaking (doc_id
// ascending among equal scores).
std::vector<std::uint32_t> ids_by_score(const ScoreSet& scores, bool descending) {
    std::vector<std::pair<double, std::uint32_t>> order;
    order.reserve(scores.size());
    for (const auto& [id, fd] : scores.scores) order.emplace_back(fd, id);
    std::sort(order.begin(), order.end(), [descending](const auto& a, const auto& b) {
        if (a.first != b.first) return descending ? a.first > b.first : a.first < b.first;
        return a.second < b.second;
    });
    std::vector<std::uint32_t> ids;
    ids.reserve(order.size());
    for (const auto& [_, id] : order) ids.push_back(id);
    return ids;
}

CoresetSelection take_prefix(const ScoreSet& scores, std::size_t budget, bool descending,
                             PruneStrategy tag) {
    check_budget(scores, budget);
    std::vector<std::uint32_t> ids = ids_by_score(scores, descending);
    ids.resize(budget);
    std::sort(ids.begin(), ids.end());
    CoresetSelection sel;
    sel.kept = std::move(ids);
    sel.strategy_used = tag;
    sel.budget = budget;
    return sel;
}

}  // namespace

double post_prune_size(double rate, std::size_t n) {
    const double value = (1.0 - rate) * static_cast<double>(n);
    const double nearest = std::round(value);
    if (std::abs(value - nearest) <= 1e-9 * std::max(1.0, std::abs(value))) return nearest;
    return value;
}

std::size_t prune_budget(double rate, std::size_t n) {
    return static_cast<std::size_t>(std::floor(post_prune_size(rate, n)));
}

std::vector<Stratum> build_strata(const ScoreSet& scores, std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("strata count must be >= 1");
    const double lo = scores.min;
    const double hi = scores.max;
    const double width = (hi - lo) / static_cast<double>(k);

    std::vector<Stratum> strata(k);
    for (std::uint32_t s = 0; s < k; ++s) {
        strata[s].index = s;
        strata[s].lo = lo + width * static_cast<double>(s);
        strata[s].hi = s + 1 == k ? hi : lo + width * static_cast<double>(s + 1);
    }
    for (const auto& [id, fd] : scores.scores) {
        std::uint32_t s = 0;
        if (width > 0.0) {
            const double raw = std::floor((fd - lo) / width);
            s = static_cast<std::uint32_t>(std::clamp(raw, 0.0, static_cast<double>(k - 1)));
        }
        strata[s].members.push_back(id);
    }
    for (auto& stratum : strata) std::sort(stratum.members.begin(), stratum.members.end());
    return strata;
}

CoresetSelection prune_furthest(const ScoreSet& scores, std::size_t budget) {
    return take_prefix(scores, budget, /*descending=*/true, PruneStrategy::furthest);
}

CoresetSelection prune_closest(const ScoreSet& scores, std::size_t budget) {
    return take_prefix(scores, budget, /*descending=*/false, PruneStrategy::closest);
}

CoresetSelection prune_stratified(const ScoreSet& scores, std::size_t budget, std::uint32_t k,
                                  std::uint64_t seed) {
    check_budget(scores, budget);
    std::vector<Stratum> strata = build_strata(scores, k);

    CoresetSelection sel;
    sel.strategy_used = PruneStrategy::stratified;
    sel.budget = budget;
    sel.per_stratum.resize(k);
    for (std::uint32_t s = 0; s < k; ++s)
        sel.per_stratum[s] = {s, strata[s].members.size(), 0};

    // Working set: non-empty strata only.
    std::vector<std::uint32_t> working;
    for (const auto& stratum : strata)
        if (!stratum.members.empty()) working.push_back(stratum.index);

    std::vector<std::vector<std::uint32_t>> selected(k);
    rng::Generator gen(seed);
    std::size_t remaining = budget;

    while (!working.empty()) {
        // Smallest-population stratum; ties by lower stratum index.
        std::size_t best = 0;
        for (std::size_t w = 1; w < working.size(); ++w)
            if (strata[working[w]].members.size() < strata[working[best]].members.size())
                best = w;
        const std::uint32_t s = working[best];
        const std::size_t quota =
            std::min(strata[s].members.size(), remaining / working.size());
        selected[s] = rng::sample_without_replacement<std::uint32_t>(gen, strata[s].members, quota);
        sel.per_stratum[s].taken = selected[s].size();
        remaining -= selected[s].size();
        working.erase(working.begin() + static_cast<std::ptrdiff_t>(best));
    }

    // Flooring leftovers: one extra per stratum with unselected members,
    // largest population first, repeated until the budget is spent.
    if (remaining > 0) {
        std::vector<std::uint32_t> order;
        for (std::uint32_t s = 0; s < k; ++s)
            if (!strata[s].members.empty()) order.push_back(s);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (strata[a].members.size() != strata[b].members.size())
                return strata[a].members.size() > strata[b].members.size();
            return a < b;
        });
        std::vector<std::vector<std::uint32_t>> pool(k);
        for (std::uint32_t s : order) {
            std::vector<std::uint32_t> rest;
            std::set_difference(strata[s].members.begin(), strata[s].members.end(),
                                selected[s].begin(), selected[s].end(), std::back_inserter(rest));
            pool[s] = std::move(rest);
        }
        while (remaining > 0) {
            bool progressed = false;
            for (std::uint32_t s : order) {
                if (remaining == 0) break;
                auto& rest = pool[s];
                if (rest.empty()) continue;
                const std::size_t pick = rng::uniform_below(gen, rest.size());
                selected[s].push_back(rest[pick]);
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
                ++sel.per_stratum[s].taken;
                --remaining;
                progressed = true;
            }
            if (!progressed)
                throw std::logic_error("stratified top-up could not spend the budget");
        }
    }

    for (const auto& ids : selected) sel.kept.insert(sel.kept.end(), ids.begin(), ids.end());
    std::sort(sel.kept.begin(), sel.kept.end());
    return sel;
}

CoresetSelection prune_random(const ScoreSet& scores, std::size_t budget, std::uint64_t seed) {
    check_budget(scores, budget);
    std::vector<std::uint32_t> ids;
    ids.reserve(scores.size());
    for (const auto& [id, _] : scores.scores) ids.push_back(id);
    std::sort(ids.begin(), ids.end());

    rng::Generator gen(seed);
    CoresetSelection sel;
    sel.kept = rng::sample_without_replacement<std::uint32_t>(gen, ids, budget);
    sel.strategy_used = PruneStrategy::random;
    sel.budget = budget;
    return sel;
}

CoresetSelection prune(const ScoreSet& scores, const PruneConfig& cfg) {
    if (!(cfg.rate > 0.0 && cfg.rate < 1.0))
        throw ConfigError("pruning rate must satisfy 0 < r < 1, got " + std::to_string(cfg.rate));
    if (cfg.strata < 1) throw ConfigError("strata count must be >= 1");
    if (cfg.size_threshold < 1) throw ConfigError("size threshold must be >= 1");
    if (scores.size() == 0) throw std::invalid_argument("score set must be non-empty");

    const std::size_t budget = prune_budget(cfg.rate, scores.size());
    if (budget == 0)
        throw DataError("pruning rate " + std::to_string(cfg.rate) + " leaves an empty coreset (N=" +
                        std::to_string(scores.size()) + ")");

    PruneStrategy strategy = cfg.strategy;
    if (strategy == PruneStrategy::adaptive)
        strategy = post_prune_size(cfg.rate, scores.size()) >
                           static_cast<double>(cfg.size_threshold)
                       ? PruneStrategy::stratified
                       : PruneStrategy::furthest;

    switch (strategy) {
        case PruneStrategy::furthest:
            return prune_furthest(scores, budget);
        case PruneStrategy::closest:
            return prune_closest(scores, budget);
        case PruneStrategy::stratified:
            return prune_stratified(scores, budget, cfg.strata,
                                    rng::derive_seed(cfg.seed, "stratified"));
        case PruneStrategy::random:
            return prune_random(scores, budget, rng::derive_seed(cfg.seed, "random"));
        case PruneStrategy::adaptive:
            break;
    }
    throw std::logic_error("unreachable prune strategy");
}

const char* strategy_name(PruneStrategy s) {
    switch (s) {
        case PruneStrategy::adaptive: return "adaptive";
        case PruneStrategy::stratified: return "stratified";
        case PruneStrategy::furthest: return "furthest";
        case PruneStrategy::closest: return "closest";
        case PruneStrategy::random: return "random";
    }
    return "unknown";
}

PruneStrategy parse_strategy(std::string_view name) {
    if (name == "adaptive") return PruneStrategy::adaptive;
    if (name == "stratified") return PruneStrategy::stratified;
    if (name == "furthest") return PruneStrategy::furthest;
    if (name == "closest") return PruneStrategy::closest;
    if (name == "random") return PruneStrategy::random;
    throw ConfigError("unknown pruning strategy: " + std::string(name));
}

}  // namespace textprune

#pragma once

#include "alpet/cluster.hpp"
#include "alpet/geometry.hpp"
#include "alpet/model_signal.hpp"
#include "alpet/pool.hpp"
#include "alpet/rng.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alpet {

enum class StrategyId {
    random,
    cosine_max,
    cosine_min,
    cosine_cycle,
    cosine_max_min_rand,
    euclidean_max,
    euclidean_min,
    euclidean_cycle,
    euclidean_max_min_rand,
    pool_greedy,
    pool_greedy_cosine,
    pool_lightweight,
    pool_entropy,
    pool_lc,
    pool_bt,
    pool_cal,
    pool_alps,
    pool_anchor,
};

std::string_view to_string(StrategyId id) noexcept;
StrategyId parse_strategy(std::string_view name);
std::span<const StrategyId> all_strategies() noexcept;

// Needs class probabilities for the unlabeled pool.
bool needs_probabilities(StrategyId id) noexcept;
// Needs probabilities for labeled instances as well (CAL).
bool needs_labeled_probabilities(StrategyId id) noexcept;
// Needs both classes present in the labeled set (CAL, anchor).
bool needs_labeled_classes(StrategyId id) noexcept;
bool needs_surprisal(StrategyId id) noexcept;

struct StrategyInputs {
    const ProbabilityMatrix* probs_unlabeled = nullptr;
    const ProbabilityMatrix* probs_labeled = nullptr;
    const SurprisalMatrix* surprisal = nullptr;
    std::size_t k_neighbors = kDefaultCalNeighbors;
    AnchorConfig anchor;
};

SelectionBatch run_strategy(StrategyId id, const Pool& pool, std::size_t m,
                            const StrategyInputs& inputs, RngStream& rng);

} // namespace alpet

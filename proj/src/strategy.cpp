#include "alpet/strategy.hpp"

#include "alpet/coreset.hpp"
#include "alpet/error.hpp"

#include <array>

namespace alpet {
namespace {

struct StrategyName {
    StrategyId id;
    std::string_view name;
};

constexpr std::array<StrategyName, 18> kNames{{
    {StrategyId::random, "random"},
    {StrategyId::cosine_max, "cosine-max"},
    {StrategyId::cosine_min, "cosine-min"},
    {StrategyId::cosine_cycle, "cosine-cycle"},
    {StrategyId::cosine_max_min_rand, "cosine-max-min-rand"},
    {StrategyId::euclidean_max, "euclidean-max"},
    {StrategyId::euclidean_min, "euclidean-min"},
    {StrategyId::euclidean_cycle, "euclidean-cycle"},
    {StrategyId::euclidean_max_min_rand, "euclidean-max-min-rand"},
    {StrategyId::pool_greedy, "pool-greedy"},
    {StrategyId::pool_greedy_cosine, "pool-greedy-cosine"},
    {StrategyId::pool_lightweight, "pool-lightweight"},
    {StrategyId::pool_entropy, "pool-entropy"},
    {StrategyId::pool_lc, "pool-lc"},
    {StrategyId::pool_bt, "pool-bt"},
    {StrategyId::pool_cal, "pool-cal"},
    {StrategyId::pool_alps, "pool-alps"},
    {StrategyId::pool_anchor, "pool-anchor"},
}};

constexpr auto kAll = [] {
    std::array<StrategyId, kNames.size()> ids{};
    for (std::size_t i = 0; i < kNames.size(); ++i) ids[i] = kNames[i].id;
    return ids;
}();

const ProbabilityMatrix& require(const ProbabilityMatrix* probs, StrategyId id, std::string_view what) {
    if (probs == nullptr) {
        fail(Errc::invalid_argument, std::string(to_string(id)) + " needs " + std::string(what));
    }
    return *probs;
}

// Uncertainty selectors rank every row they are given, so the rows must be
// unlabeled pool members.
const ProbabilityMatrix& require_unlabeled(const Pool& pool, const ProbabilityMatrix* probs, StrategyId id) {
    const auto& p = require(probs, id, "unlabeled probabilities");
    for (std::size_t i : p.indices()) {
        if (i >= pool.size() || pool.is_labeled(i)) {
            fail(Errc::invalid_argument, std::string(to_string(id)) + ": probability row for index " +
                                             std::to_string(i) + " is not an unlabeled pool member");
        }
    }
    return p;
}

} // namespace

std::string_view to_string(StrategyId id) noexcept {
    for (const auto& n : kNames) {
        if (n.id == id) return n.name;
    }
    return "unknown";
}

StrategyId parse_strategy(std::string_view name) {
    for (const auto& n : kNames) {
        if (n.name == name) return n.id;
    }
    fail(Errc::invalid_argument, "unknown strategy '" + std::string(name) + "'");
}

std::span<const StrategyId> all_strategies() noexcept { return kAll; }

bool needs_probabilities(StrategyId id) noexcept {
    switch (id) {
    case StrategyId::pool_entropy:
    case StrategyId::pool_lc:
    case StrategyId::pool_bt:
    case StrategyId::pool_cal:
    case StrategyId::pool_anchor:
        return true;
    default:
        return false;
    }
}

bool needs_labeled_probabilities(StrategyId id) noexcept { return id == StrategyId::pool_cal; }

bool needs_labeled_classes(StrategyId id) noexcept {
    return id == StrategyId::pool_cal || id == StrategyId::pool_anchor;
}

bool needs_surprisal(StrategyId id) noexcept { return id == StrategyId::pool_alps; }

SelectionBatch run_strategy(StrategyId id, const Pool& pool, std::size_t m, const StrategyInputs& in, RngStream& rng) {
    SelectionBatch batch;
    switch (id) {
    case StrategyId::random: batch = select_random(pool, m, rng); break;
    case StrategyId::cosine_max: batch = select_max_avg(pool, m, Metric::cosine, rng); break;
    case StrategyId::cosine_min: batch = select_min_avg(pool, m, Metric::cosine, rng); break;
    case StrategyId::cosine_cycle: batch = select_max_min_cycle(pool, m, Metric::cosine, rng); break;
    case StrategyId::cosine_max_min_rand: batch = select_max_min_rand(pool, m, Metric::cosine, rng); break;
    case StrategyId::euclidean_max: batch = select_max_avg(pool, m, Metric::euclidean, rng); break;
    case StrategyId::euclidean_min: batch = select_min_avg(pool, m, Metric::euclidean, rng); break;
    case StrategyId::euclidean_cycle: batch = select_max_min_cycle(pool, m, Metric::euclidean, rng); break;
    case StrategyId::euclidean_max_min_rand: batch = select_max_min_rand(pool, m, Metric::euclidean, rng); break;
    case StrategyId::pool_greedy: batch = select_greedy_coreset(pool, m, Metric::euclidean, rng); break;
    case StrategyId::pool_greedy_cosine: batch = select_greedy_coreset(pool, m, Metric::cosine, rng); break;
    case StrategyId::pool_lightweight: batch = select_lightweight_coreset(pool, m, rng); break;
    case StrategyId::pool_entropy:
        batch = select_entropy(require_unlabeled(pool, in.probs_unlabeled, id), m);
        break;
    case StrategyId::pool_lc:
        batch = select_least_confidence(require_unlabeled(pool, in.probs_unlabeled, id), m);
        break;
    case StrategyId::pool_bt:
        batch = select_breaking_ties(require_unlabeled(pool, in.probs_unlabeled, id), m);
        break;
    case StrategyId::pool_cal:
        batch = select_cal(pool, require(in.probs_unlabeled, id, "unlabeled probabilities"),
                           require(in.probs_labeled, id, "labeled probabilities"), in.k_neighbors, m);
        break;
    case StrategyId::pool_alps:
        if (in.surprisal == nullptr) fail(Errc::invalid_argument, "pool-alps needs a surprisal matrix");
        batch = select_alps(pool, *in.surprisal, m, rng);
        break;
    case StrategyId::pool_anchor:
        batch = select_anchor_subpool(pool, in.probs_unlabeled, m, in.anchor, rng);
        break;
    }
    batch.strategy = std::string(to_string(id));
    return batch;
}

} // namespace alpet

#pragma once

#include "alpet/pool.hpp"
#include "alpet/rng.hpp"

#include <span>
#include <string_view>

namespace alpet {

enum class Metric { cosine, euclidean };

std::string_view to_string(Metric metric) noexcept;

// 1 - a.b / (|a||b|). Zero-norm operands are an error.
double cosine_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);
double distance(Metric metric, std::span<const double> a, std::span<const double> b);

double mean_distance_to_set(std::size_t candidate, std::span<const std::size_t> selected,
                            const Pool& pool, Metric metric);

// Greedy average-distance selectors. Each starts with one uniform-random
// unlabeled pick (the first draw of `rng`); the running averages cover only
// picks of the current batch. Ties go to the lowest pool index.
SelectionBatch select_max_avg(const Pool& pool, std::size_t m, Metric metric, RngStream& rng);
SelectionBatch select_min_avg(const Pool& pool, std::size_t m, Metric metric, RngStream& rng);

// random, max, min, max, min, ...
SelectionBatch select_max_min_cycle(const Pool& pool, std::size_t m, Metric metric, RngStream& rng);

// random, then max, min, random repeating. The cold-start pick fills the
// random slot of the first triple.
SelectionBatch select_max_min_rand(const Pool& pool, std::size_t m, Metric metric, RngStream& rng);

namespace detail {

// Rejects zero-norm rows among `indices` when the metric is cosine.
void check_metric_domain(const Pool& pool, std::span<const std::size_t> indices, Metric metric);

// Norm cache so cosine distances within one selection call reuse |x|.
class DistanceCache {
public:
    DistanceCache(const Pool& pool, Metric metric);
    double operator()(std::size_t i, std::size_t j) const;

private:
    const Pool& pool_;
    Metric metric_;
    std::vector<double> norms_;
};

} // namespace detail

} // namespace alpet

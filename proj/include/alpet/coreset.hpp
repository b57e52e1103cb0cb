#pragma once

#include "alpet/geometry.hpp"
#include "alpet/pool.hpp"
#include "alpet/rng.hpp"

#include <span>
#include <vector>

namespace alpet {

// Lightweight-coreset sampling distribution over the unlabeled indices:
//   q(x) = 1/(2n) + |x - mu|^2 / (2 * sum |x' - mu|^2)
// with mu the unlabeled mean. Falls back to uniform when the spread is zero.
struct CoresetSamplingWeights {
    std::vector<std::size_t> indices; // ascending pool indices
    std::vector<double> q;            // aligned to indices, sums to 1
};

// k-center greedy. Centers start from the labeled set; with nothing labeled
// the first pick is uniform-random and counts toward m.
SelectionBatch select_greedy_coreset(const Pool& pool, std::size_t m, Metric metric, RngStream& rng);

// max over every pool point of the distance to its nearest center.
double coreset_radius(const Pool& pool, std::span<const std::size_t> centers, Metric metric);

CoresetSamplingWeights lightweight_weights(const Pool& pool);

// Sequential draws without replacement, renormalizing q over the remaining
// indices after each draw.
SelectionBatch select_lightweight_coreset(const Pool& pool, std::size_t m, RngStream& rng);

} // namespace alpet

#include "alpet/coreset.hpp"

#include "alpet/error.hpp"

#include <algorithm>
#include <limits>

namespace alpet {

SelectionBatch select_greedy_coreset(const Pool& pool, std::size_t m, Metric metric, RngStream& rng) {
    const auto candidates = pool.unlabeled();
    const auto centers = pool.labeled();
    check_budget(m, candidates.size());
    detail::check_metric_domain(pool, candidates, metric);
    detail::check_metric_domain(pool, centers, metric);
    const detail::DistanceCache dist(pool, metric);

    SelectionBatch batch{{}, metric == Metric::euclidean ? "pool-greedy" : "pool-greedy-cosine", 0};
    if (m == 0) return batch;
    batch.indices.reserve(m);

    const std::size_t n = candidates.size();
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::vector<unsigned char> taken(n, 0);

    auto add_center = [&](std::size_t center) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!taken[c]) min_dist[c] = std::min(min_dist[c], dist(candidates[c], center));
        }
    };

    if (centers.empty()) {
        const auto first = static_cast<std::size_t>(rng.uniform_index(n));
        taken[first] = 1;
        batch.indices.push_back(candidates[first]);
        add_center(candidates[first]);
    } else {
        for (std::size_t center : centers) add_center(center);
    }

    while (batch.indices.size() < m) {
        std::size_t best = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (taken[c]) continue;
            if (best == n || min_dist[c] > min_dist[best]) best = c;
        }
        taken[best] = 1;
        batch.indices.push_back(candidates[best]);
        add_center(candidates[best]);
    }
    return batch;
}

double coreset_radius(const Pool& pool, std::span<const std::size_t> centers, Metric metric) {
    if (centers.empty()) fail(Errc::empty_set, "coreset radius needs at least one center");
    double radius = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t c : centers) nearest = std::min(nearest, distance(metric, pool.embedding(i), pool.embedding(c)));
        radius = std::max(radius, nearest);
    }
    return radius;
}

CoresetSamplingWeights lightweight_weights(const Pool& pool) {
    CoresetSamplingWeights w;
    w.indices = pool.unlabeled();
    const std::size_t n = w.indices.size();
    if (n == 0) fail(Errc::empty_set, "lightweight coreset weights over an empty pool");
    const std::size_t d = pool.embeddings().dim();

    std::vector<double> mean(d, 0.0);
    for (std::size_t i : w.indices) {
        const auto x = pool.embedding(i);
        for (std::size_t j = 0; j < d; ++j) mean[j] += x[j];
    }
    for (double& v : mean) v /= static_cast<double>(n);

    std::vector<double> sq(n, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto x = pool.embedding(w.indices[r]);
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - mean[j];
            s += diff * diff;
        }
        sq[r] = s;
        total += s;
    }

    const double uniform = 1.0 / static_cast<double>(n);
    w.q.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        w.q[r] = total > 0.0 ? 0.5 * uniform + 0.5 * sq[r] / total : uniform;
    }
    return w;
}

SelectionBatch select_lightweight_coreset(const Pool& pool, std::size_t m, RngStream& rng) {
    SelectionBatch batch{{}, "pool-lightweight", 0};
    check_budget(m, pool.unlabeled_count());
    if (m == 0) return batch;
    const auto weights = lightweight_weights(pool);

    std::vector<std::size_t> remaining(weights.indices.size());
    for (std::size_t r = 0; r < remaining.size(); ++r) remaining[r] = r;

    batch.indices.reserve(m);
    while (batch.indices.size() < m) {
        double total = 0.0;
        for (std::size_t r : remaining) total += weights.q[r];
        const double target = rng.uniform01() * total;
        double cumulative = 0.0;
        std::size_t chosen = remaining.size() - 1;
        for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
            cumulative += weights.q[remaining[pos]];
            if (cumulative > target) {
                chosen = pos;
                break;
            }
        }
        batch.indices.push_back(weights.indices[remaining[chosen]]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
    return batch;
}

} // namespace alpet

#include "alpet/geometry.hpp"

#include "alpet/error.hpp"

#include <algorithm>
#include <cmath>

namespace alpet {
namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(Errc::dimension_mismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

enum class Pick { random, max, min };

template <typename Schedule>
SelectionBatch greedy_average(const Pool& pool, std::size_t m, Metric metric, RngStream& rng,
                              Schedule schedule, std::string name) {
    const auto candidates = pool.unlabeled();
    check_budget(m, candidates.size(), /*allow_zero=*/false);
    detail::check_metric_domain(pool, candidates, metric);
    const detail::DistanceCache dist(pool, metric);

    const std::size_t n = candidates.size();
    std::vector<double> sums(n, 0.0);
    std::vector<unsigned char> taken(n, 0);
    SelectionBatch batch{{}, std::move(name), 0};
    batch.indices.reserve(m);

    std::size_t last = static_cast<std::size_t>(rng.uniform_index(n));
    taken[last] = 1;
    batch.indices.push_back(candidates[last]);

    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!taken[c]) sums[c] += dist(candidates[c], candidates[last]);
        }
        const double count = static_cast<double>(k);
        const Pick pick = schedule(k);
        std::size_t best = n;
        if (pick == Pick::random) {
            std::vector<std::size_t> remaining;
            remaining.reserve(n - k);
            for (std::size_t c = 0; c < n; ++c) {
                if (!taken[c]) remaining.push_back(c);
            }
            best = remaining[static_cast<std::size_t>(rng.uniform_index(remaining.size()))];
        } else {
            double best_value = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                if (taken[c]) continue;
                const double avg = sums[c] / count;
                const bool better = best == n || (pick == Pick::max ? avg > best_value : avg < best_value);
                if (better) {
                    best = c;
                    best_value = avg;
                }
            }
        }
        taken[best] = 1;
        last = best;
        batch.indices.push_back(candidates[best]);
    }
    return batch;
}

std::string strategy_name(Metric metric, std::string_view suffix) {
    std::string name(to_string(metric));
    name += '-';
    name += suffix;
    return name;
}

} // namespace

std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::cosine ? "cosine" : "euclidean";
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    check_dims(a, b);
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) fail(Errc::zero_norm, "cosine distance of a zero vector");
    return std::clamp(1.0 - dot(a, b) / (na * nb), 0.0, 2.0);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    check_dims(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
    return metric == Metric::cosine ? cosine_distance(a, b) : euclidean_distance(a, b);
}

double mean_distance_to_set(std::size_t candidate, std::span<const std::size_t> selected,
                            const Pool& pool, Metric metric) {
    if (selected.empty()) fail(Errc::empty_set, "mean distance to an empty selection");
    if (std::find(selected.begin(), selected.end(), candidate) != selected.end()) {
        fail(Errc::invalid_argument, "candidate " + std::to_string(candidate) + " is already selected");
    }
    double s = 0.0;
    for (std::size_t j : selected) s += distance(metric, pool.embedding(candidate), pool.embedding(j));
    return s / static_cast<double>(selected.size());
}

SelectionBatch select_max_avg(const Pool& pool, std::size_t m, Metric metric, RngStream& rng) {
    return greedy_average(pool, m, metric, rng, [](std::size_t) { return Pick::max; },
                          strategy_name(metric, "max"));
}

SelectionBatch select_min_avg(const Pool& pool, std::size_t m, Metric metric, RngStream& rng) {
    return greedy_average(pool, m, metric, rng, [](std::size_t) { return Pick::min; },
                          strategy_name(metric, "min"));
}

SelectionBatch select_max_min_cycle(const Pool& pool, std::size_t m, Metric metric, RngStream& rng) {
    return greedy_average(pool, m, metric, rng,
                          [](std::size_t k) { return k % 2 == 1 ? Pick::max : Pick::min; },
                          strategy_name(metric, "cycle"));
}

SelectionBatch select_max_min_rand(const Pool& pool, std::size_t m, Metric metric, RngStream& rng) {
    return greedy_average(pool, m, metric, rng,
                          [](std::size_t k) {
                              switch ((k - 1) % 3) {
                              case 0: return Pick::max;
                              case 1: return Pick::min;
                              default: return Pick::random;
                              }
                          },
                          strategy_name(metric, "max-min-rand"));
}

namespace detail {

void check_metric_domain(const Pool& pool, std::span<const std::size_t> indices, Metric metric) {
    if (metric != Metric::cosine) return;
    for (std::size_t i : indices) {
        if (norm(pool.embedding(i)) == 0.0) {
            fail(Errc::zero_norm, "record '" + pool.record(i).id + "' has a zero embedding");
        }
    }
}

DistanceCache::DistanceCache(const Pool& pool, Metric metric) : pool_(pool), metric_(metric) {
    if (metric_ == Metric::cosine) {
        norms_.resize(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) norms_[i] = norm(pool.embedding(i));
    }
}

double DistanceCache::operator()(std::size_t i, std::size_t j) const {
    const auto a = pool_.embedding(i);
    const auto b = pool_.embedding(j);
    if (metric_ == Metric::euclidean) return euclidean_distance(a, b);
    if (norms_[i] == 0.0 || norms_[j] == 0.0) fail(Errc::zero_norm, "cosine distance of a zero vector");
    return std::clamp(1.0 - dot(a, b) / (norms_[i] * norms_[j]), 0.0, 2.0);
}

} // namespace detail

} // namespace alpet

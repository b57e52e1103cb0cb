#include "alpet/cluster.hpp"

#include "alpet/error.hpp"
#include "alpet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace alpet {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Nearest centroid (lowest id on ties) and its squared distance.
std::pair<std::size_t, double> nearest_centroid(const Matrix& centroids, std::span<const double> x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(centroids.row(c), x);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return {best, best_d};
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, RngStream& rng) {
    const std::size_t n = points.rows();
    Matrix centroids(k, points.cols());
    std::vector<unsigned char> chosen(n, 0);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t c, std::size_t p) {
        chosen[p] = 1;
        std::copy(points.row(p).begin(), points.row(p).end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(p)));
    };

    take(0, static_cast<std::size_t>(rng.uniform_index(n)));
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += d2[i];
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += d2[i];
                if (d2[i] > 0.0 && cumulative > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                for (std::size_t i = n; i-- > 0;) {
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every remaining point coincides with a centroid.
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) free.push_back(i);
            }
            pick = free[static_cast<std::size_t>(rng.uniform_index(free.size()))];
        }
        take(c, pick);
    }
    return centroids;
}

double assign(const Matrix& points, const Matrix& centroids, std::vector<std::size_t>& assignments,
              std::vector<double>& point_cost) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto [c, d] = nearest_centroid(centroids, points.row(i));
        assignments[i] = c;
        point_cost[i] = d;
        inertia += d;
    }
    return inertia;
}

// Nearest not-yet-taken row among `rows` to `target`; lowest row index on ties.
std::size_t nearest_free(const Matrix& points, std::span<const std::size_t> rows, std::span<const double> target,
                         std::vector<unsigned char>& taken) {
    std::size_t best = rows.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (taken[r]) continue;
        const double d = squared_distance(points.row(rows[r]), target);
        if (best == rows.size() || d < best_d) {
            best = r;
            best_d = d;
        }
    }
    taken[best] = 1;
    return best;
}

} // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, RngStream& rng, std::size_t max_iter, double tol) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    if (k == 0) fail(Errc::invalid_argument, "k-means needs k >= 1");
    if (k > n) fail(Errc::capacity, "k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " points");
    if (max_iter == 0) fail(Errc::invalid_argument, "k-means needs max_iter >= 1");
    if (!(tol >= 0.0)) fail(Errc::invalid_argument, "k-means tolerance must be >= 0");
    if (!points.all_finite()) fail(Errc::non_finite, "k-means input has a non-finite entry");

    KMeansResult result;
    result.centroids = seed_plus_plus(points, k, rng);
    result.assignments.assign(n, 0);
    std::vector<double> cost(n, 0.0);

    for (std::size_t it = 1; it <= max_iter; ++it) {
        result.inertia = assign(points, result.centroids, result.assignments, cost);
        result.inertia_history.push_back(result.inertia);

        Matrix next(k, d, 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = result.assignments[i];
            ++counts[c];
            auto dst = next.row(c);
            const auto src = points.row(i);
            for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
        }
        std::vector<unsigned char> reseeded(n, 0);
        for (std::size_t c = 0; c < k; ++c) {
            auto row = next.row(c);
            if (counts[c] > 0) {
                for (double& v : row) v /= static_cast<double>(counts[c]);
                continue;
            }
            // Empty cluster: move it onto the worst-served point.
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (reseeded[i]) continue;
                if (far == n || cost[i] > cost[far]) far = i;
            }
            reseeded[far] = 1;
            std::copy(points.row(far).begin(), points.row(far).end(), row.begin());
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(next.row(c), result.centroids.row(c))));
        }
        result.centroids = std::move(next);
        result.iterations = it;
        if (shift < tol) break;
    }
    result.inertia = assign(points, result.centroids, result.assignments, cost);
    result.inertia_history.push_back(result.inertia);
    return result;
}

SurprisalMatrix::SurprisalMatrix(Matrix values) : values_(std::move(values)) {
    if (!values_.all_finite()) fail(Errc::non_finite, "surprisal matrix has a non-finite entry");
}

SelectionBatch select_alps(const Pool& pool, const SurprisalMatrix& surprisal, std::size_t m, RngStream& rng) {
    if (surprisal.rows() != pool.size()) {
        fail(Errc::count_mismatch, std::to_string(surprisal.rows()) + " surprisal rows for a pool of " +
                                       std::to_string(pool.size()));
    }
    const auto candidates = pool.unlabeled();
    check_budget(m, candidates.size());
    SelectionBatch batch{{}, "pool-alps", 0};
    if (m == 0) return batch;

    const Matrix points = surprisal.matrix().select_rows(candidates);
    const auto clusters = kmeans(points, m, rng);
    std::vector<std::size_t> rows(candidates.size());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<unsigned char> taken(candidates.size(), 0);
    batch.indices.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
        batch.indices.push_back(candidates[nearest_free(points, rows, clusters.centroids.row(c), taken)]);
    }
    return batch;
}

std::string_view to_string(AnchorInner inner) noexcept {
    return inner == AnchorInner::entropy ? "entropy" : "random";
}

AnchorInner parse_anchor_inner(std::string_view name) {
    if (name == "entropy") return AnchorInner::entropy;
    if (name == "random") return AnchorInner::random;
    fail(Errc::invalid_argument, "unknown anchor inner strategy '" + std::string(name) + "'");
}

std::vector<std::size_t> class_anchors(const Pool& pool, Label label, std::size_t anchors_per_class, RngStream& rng) {
    if (anchors_per_class == 0) fail(Errc::invalid_argument, "anchors_per_class must be positive");
    std::vector<std::size_t> members;
    for (std::size_t i : pool.labeled()) {
        if (pool.record(i).gold_label == label) members.push_back(i);
    }
    if (members.empty()) fail(Errc::missing_class, "no labeled instance of class " + std::to_string(label));

    const std::size_t k = std::min(anchors_per_class, members.size());
    const Matrix& emb = pool.embeddings().matrix();
    const Matrix points = emb.select_rows(members);
    const auto clusters = kmeans(points, k, rng);
    std::vector<std::size_t> rows(members.size());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<unsigned char> taken(members.size(), 0);
    std::vector<std::size_t> anchors;
    anchors.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        anchors.push_back(members[nearest_free(points, rows, clusters.centroids.row(c), taken)]);
    }
    return anchors;
}

AnchorSubpool anchor_subpool(const Pool& pool, std::size_t m, const AnchorConfig& cfg, RngStream& rng) {
    if (cfg.subpool_factor == 0) fail(Errc::invalid_argument, "subpool_factor must be positive");
    const auto candidates = pool.unlabeled();
    check_budget(m, candidates.size());

    AnchorSubpool out;
    for (Label label : {kNoCitation, kCitationNeeded}) {
        auto stream = rng.child("anchors/" + std::to_string(label));
        const auto anchors = class_anchors(pool, label, cfg.anchors_per_class, stream);
        out.anchors.insert(out.anchors.end(), anchors.begin(), anchors.end());
    }
    detail::check_metric_domain(pool, candidates, Metric::cosine);
    detail::check_metric_domain(pool, out.anchors, Metric::cosine);
    const detail::DistanceCache dist(pool, Metric::cosine);

    std::vector<double> similarity(candidates.size());
    for (std::size_t r = 0; r < candidates.size(); ++r) {
        double s = 0.0;
        for (std::size_t a : out.anchors) s += 1.0 - dist(candidates[r], a);
        similarity[r] = s / static_cast<double>(out.anchors.size());
    }

    const std::size_t size = std::min(cfg.subpool_factor * m, candidates.size());
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (similarity[a] != similarity[b]) return similarity[a] > similarity[b];
                          return a < b;
                      });
    for (std::size_t t = 0; t < size; ++t) {
        out.subpool.push_back(candidates[order[t]]);
        out.scores.push_back(similarity[order[t]]);
    }
    return out;
}

SelectionBatch select_anchor_subpool(const Pool& pool, const ProbabilityMatrix* probs, std::size_t m,
                                     const AnchorConfig& cfg, RngStream& rng) {
    if (cfg.inner_strategy == AnchorInner::entropy && probs == nullptr) {
        fail(Errc::invalid_argument, "anchor subsampling with entropy inner strategy needs probabilities");
    }
    const auto sub = anchor_subpool(pool, m, cfg, rng);
    SelectionBatch batch;
    if (cfg.inner_strategy == AnchorInner::entropy) {
        batch = select_entropy(probs->subset(sub.subpool), m);
    } else {
        auto sorted = sub.subpool;
        std::sort(sorted.begin(), sorted.end());
        auto stream = rng.child("inner");
        batch.indices = sample_without_replacement(std::move(sorted), m, stream);
    }
    batch.strategy = "pool-anchor";
    return batch;
}

} // namespace alpet

#pragma once

#include "alpet/matrix.hpp"
#include "alpet/model_signal.hpp"
#include "alpet/pool.hpp"
#include "alpet/rng.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace alpet {

struct KMeansResult {
    Matrix centroids;                     // k x d
    std::vector<std::size_t> assignments; // one cluster id per point
    double inertia = 0.0;                 // sum of squared distances to assigned centroid
    std::size_t iterations = 0;
    std::vector<double> inertia_history;  // after each assignment step, last entry == inertia
};

inline constexpr std::size_t kKMeansMaxIter = 100;
inline constexpr double kKMeansTol = 1e-6;

// k-means++ seeding followed by Lloyd iterations. Stops when the largest
// centroid displacement drops below `tol` or after `max_iter` updates. An
// empty cluster is reseeded at the point farthest from its own centroid.
KMeansResult kmeans(const Matrix& points, std::size_t k, RngStream& rng,
                    std::size_t max_iter = kKMeansMaxIter, double tol = kKMeansTol);

// Finite n x s matrix whose row i belongs to pool record i.
class SurprisalMatrix {
public:
    SurprisalMatrix() = default;
    explicit SurprisalMatrix(Matrix values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t dim() const noexcept { return values_.cols(); }
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    const Matrix& matrix() const noexcept { return values_; }

private:
    Matrix values_;
};

// Cluster the unlabeled surprisal rows with k = m, then for centroid 0..m-1
// take the nearest instance not yet picked.
SelectionBatch select_alps(const Pool& pool, const SurprisalMatrix& surprisal, std::size_t m,
                           RngStream& rng);

enum class AnchorInner { entropy, random };

struct AnchorConfig {
    std::size_t anchors_per_class = 10;
    std::size_t subpool_factor = 10;
    AnchorInner inner_strategy = AnchorInner::entropy;
};

std::string_view to_string(AnchorInner inner) noexcept;
AnchorInner parse_anchor_inner(std::string_view name);

// Per class, the labeled instances nearest the centroids of a k-means with
// k = min(anchors_per_class, class size) over that class's embeddings.
std::vector<std::size_t> class_anchors(const Pool& pool, Label label, std::size_t anchors_per_class,
                                       RngStream& rng);

struct AnchorSubpool {
    std::vector<std::size_t> anchors;  // class 0 anchors then class 1 anchors
    std::vector<std::size_t> subpool;  // ranked by descending mean similarity
    std::vector<double> scores;        // aligned to subpool
};

AnchorSubpool anchor_subpool(const Pool& pool, std::size_t m, const AnchorConfig& cfg, RngStream& rng);

SelectionBatch select_anchor_subpool(const Pool& pool, const ProbabilityMatrix* probs,
                                     std::size_t m, const AnchorConfig& cfg, RngStream& rng);

} // namespace alpet

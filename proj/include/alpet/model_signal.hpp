#pragma once

#include "alpet/matrix.hpp"
#include "alpet/pool.hpp"

#include <span>
#include <vector>

namespace alpet {

// Class distributions, one row per pool index in `indices`.
class ProbabilityMatrix {
public:
    static constexpr double kRowSumTolerance = 1e-6;

    ProbabilityMatrix() = default;
    // Validates entries in [0, 1], row sums within 1e-6 of 1, unique indices.
    ProbabilityMatrix(std::vector<std::size_t> indices, Matrix values);
    // Rows aligned to 0..n-1.
    explicit ProbabilityMatrix(Matrix values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t classes() const noexcept { return values_.cols(); }
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::span<const double> row(std::size_t r) const { return values_.row(r); }
    const Matrix& values() const noexcept { return values_; }

    // Row position of a pool index; throws if absent.
    std::size_t position_of(std::size_t pool_index) const;
    bool contains(std::size_t pool_index) const;

    // Rows for the listed pool indices, in that order.
    ProbabilityMatrix subset(std::span<const std::size_t> pool_indices) const;

private:
    std::vector<std::size_t> indices_;
    Matrix values_;
    std::vector<std::size_t> order_; // row positions sorted by pool index
};

void check_distribution(std::span<const double> row);

// -sum p ln p, nats, 0 ln 0 = 0.
double prediction_entropy(std::span<const double> row);
// max_c p_c
double prediction_confidence(std::span<const double> row);
// p(1st) - p(2nd)
double prediction_margin(std::span<const double> row);

inline constexpr double kKlEpsilon = 1e-12;
// sum p ln(p / max(q, eps)), skipping p = 0 terms.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// All three rank rows and return the pool indices of the top m;
// ties always go to the lower pool index.
SelectionBatch select_entropy(const ProbabilityMatrix& probs, std::size_t m);
SelectionBatch select_least_confidence(const ProbabilityMatrix& probs, std::size_t m);
SelectionBatch select_breaking_ties(const ProbabilityMatrix& probs, std::size_t m);

inline constexpr std::size_t kDefaultCalNeighbors = 10;

// Contrastive score of each unlabeled row: mean KL(neighbor || candidate)
// over its k nearest labeled instances (euclidean on pool embeddings,
// neighbors ordered by (distance, index)). Returns scores aligned to
// probs_unlabeled rows.
std::vector<double> cal_scores(const Pool& pool, const ProbabilityMatrix& probs_unlabeled,
                               const ProbabilityMatrix& probs_labeled, std::size_t k_neighbors);

SelectionBatch select_cal(const Pool& pool, const ProbabilityMatrix& probs_unlabeled,
                          const ProbabilityMatrix& probs_labeled, std::size_t k_neighbors,
                          std::size_t m);

} // namespace alpet

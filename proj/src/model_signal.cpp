#include "alpet/model_signal.hpp"

#include "alpet/error.hpp"
#include "alpet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace alpet {
namespace {

// Top m rows by `better(score_a, score_b)`, ties to the lower pool index.
template <typename Better>
SelectionBatch rank_rows(const ProbabilityMatrix& probs, const std::vector<double>& scores, std::size_t m,
                         Better better, std::string name) {
    check_budget(m, probs.rows());
    std::vector<std::size_t> order(probs.rows());
    std::iota(order.begin(), order.end(), 0);
    const auto& idx = probs.indices();
    auto cmp = [&](std::size_t a, std::size_t b) {
        if (better(scores[a], scores[b])) return true;
        if (better(scores[b], scores[a])) return false;
        return idx[a] < idx[b];
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(), cmp);
    SelectionBatch batch{{}, std::move(name), 0};
    batch.indices.reserve(m);
    for (std::size_t i = 0; i < m; ++i) batch.indices.push_back(idx[order[i]]);
    return batch;
}

template <typename Score>
std::vector<double> row_scores(const ProbabilityMatrix& probs, Score score) {
    std::vector<double> out(probs.rows());
    for (std::size_t r = 0; r < probs.rows(); ++r) out[r] = score(probs.row(r));
    return out;
}

} // namespace

ProbabilityMatrix::ProbabilityMatrix(std::vector<std::size_t> indices, Matrix values)
    : indices_(std::move(indices)), values_(std::move(values)) {
    if (indices_.size() != values_.rows()) {
        fail(Errc::dimension_mismatch, std::to_string(indices_.size()) + " indices for " +
                                           std::to_string(values_.rows()) + " probability rows");
    }
    for (std::size_t r = 0; r < values_.rows(); ++r) check_distribution(values_.row(r));
    order_.resize(indices_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return indices_[a] < indices_[b]; });
    for (std::size_t k = 1; k < order_.size(); ++k) {
        if (indices_[order_[k]] == indices_[order_[k - 1]]) {
            fail(Errc::invalid_argument, "index " + std::to_string(indices_[order_[k]]) + " has two probability rows");
        }
    }
}

ProbabilityMatrix::ProbabilityMatrix(Matrix values)
    : ProbabilityMatrix(
          [&] {
              std::vector<std::size_t> idx(values.rows());
              std::iota(idx.begin(), idx.end(), 0);
              return idx;
          }(),
          std::move(values)) {}

std::size_t ProbabilityMatrix::position_of(std::size_t pool_index) const {
    const auto it = std::lower_bound(order_.begin(), order_.end(), pool_index,
                                     [&](std::size_t pos, std::size_t v) { return indices_[pos] < v; });
    if (it == order_.end() || indices_[*it] != pool_index) {
        fail(Errc::invalid_argument, "no probability row for index " + std::to_string(pool_index));
    }
    return *it;
}

bool ProbabilityMatrix::contains(std::size_t pool_index) const {
    const auto it = std::lower_bound(order_.begin(), order_.end(), pool_index,
                                     [&](std::size_t pos, std::size_t v) { return indices_[pos] < v; });
    return it != order_.end() && indices_[*it] == pool_index;
}

ProbabilityMatrix ProbabilityMatrix::subset(std::span<const std::size_t> pool_indices) const {
    Matrix values(pool_indices.size(), classes());
    for (std::size_t r = 0; r < pool_indices.size(); ++r) {
        const auto src = row(position_of(pool_indices[r]));
        std::copy(src.begin(), src.end(), values.row(r).begin());
    }
    return ProbabilityMatrix({pool_indices.begin(), pool_indices.end()}, std::move(values));
}

void check_distribution(std::span<const double> row) {
    if (row.empty()) fail(Errc::invalid_distribution, "empty distribution");
    double sum = 0.0;
    for (double p : row) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            fail(Errc::invalid_distribution, "entry " + std::to_string(p) + " outside [0, 1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > ProbabilityMatrix::kRowSumTolerance) {
        fail(Errc::invalid_distribution, "row sums to " + std::to_string(sum));
    }
}

double prediction_entropy(std::span<const double> row) {
    check_distribution(row);
    double h = 0.0;
    for (double p : row) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double prediction_confidence(std::span<const double> row) {
    check_distribution(row);
    return *std::max_element(row.begin(), row.end());
}

double prediction_margin(std::span<const double> row) {
    check_distribution(row);
    double first = -1.0;
    double second = -1.0;
    for (double p : row) {
        if (p > first) {
            second = first;
            first = p;
        } else if (p > second) {
            second = p;
        }
    }
    return row.size() == 1 ? first : first - second;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        fail(Errc::dimension_mismatch, std::to_string(p.size()) + " vs " + std::to_string(q.size()) + " classes");
    }
    check_distribution(p);
    check_distribution(q);
    double kl = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (p[c] > 0.0) kl += p[c] * std::log(p[c] / std::max(q[c], kKlEpsilon));
    }
    return std::max(kl, 0.0);
}

SelectionBatch select_entropy(const ProbabilityMatrix& probs, std::size_t m) {
    return rank_rows(probs, row_scores(probs, prediction_entropy), m, std::greater<>{}, "pool-entropy");
}

SelectionBatch select_least_confidence(const ProbabilityMatrix& probs, std::size_t m) {
    return rank_rows(probs, row_scores(probs, prediction_confidence), m, std::less<>{}, "pool-lc");
}

SelectionBatch select_breaking_ties(const ProbabilityMatrix& probs, std::size_t m) {
    return rank_rows(probs, row_scores(probs, prediction_margin), m, std::less<>{}, "pool-bt");
}

std::vector<double> cal_scores(const Pool& pool, const ProbabilityMatrix& probs_unlabeled,
                               const ProbabilityMatrix& probs_labeled, std::size_t k_neighbors) {
    const auto& labeled = probs_labeled.indices();
    if (labeled.empty()) fail(Errc::empty_set, "contrastive selection needs labeled neighbors");
    if (k_neighbors == 0) fail(Errc::invalid_argument, "k_neighbors must be at least 1");
    if (probs_unlabeled.classes() != probs_labeled.classes()) {
        fail(Errc::dimension_mismatch, "labeled and unlabeled probabilities disagree on class count");
    }
    for (std::size_t i : labeled) {
        if (i >= pool.size() || !pool.is_labeled(i)) {
            fail(Errc::invalid_argument, "neighbor index " + std::to_string(i) + " is not labeled");
        }
    }
    const std::size_t k = std::min(k_neighbors, labeled.size());

    std::vector<double> scores(probs_unlabeled.rows());
    std::vector<std::pair<double, std::size_t>> neighbors(labeled.size());
    for (std::size_t r = 0; r < probs_unlabeled.rows(); ++r) {
        const std::size_t candidate = probs_unlabeled.indices()[r];
        if (candidate >= pool.size() || pool.is_labeled(candidate)) {
            fail(Errc::invalid_argument, "candidate index " + std::to_string(candidate) + " is not unlabeled");
        }
        for (std::size_t j = 0; j < labeled.size(); ++j) {
            neighbors[j] = {euclidean_distance(pool.embedding(candidate), pool.embedding(labeled[j])), j};
        }
        std::partial_sort(neighbors.begin(), neighbors.begin() + static_cast<std::ptrdiff_t>(k), neighbors.end(),
                          [&](const auto& a, const auto& b) {
                              if (a.first != b.first) return a.first < b.first;
                              return labeled[a.second] < labeled[b.second];
                          });
        double sum = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            sum += kl_divergence(probs_labeled.row(neighbors[t].second), probs_unlabeled.row(r));
        }
        scores[r] = sum / static_cast<double>(k);
    }
    return scores;
}

SelectionBatch select_cal(const Pool& pool, const ProbabilityMatrix& probs_unlabeled,
                          const ProbabilityMatrix& probs_labeled, std::size_t k_neighbors, std::size_t m) {
    check_budget(m, probs_unlabeled.rows());
    const auto scores = cal_scores(pool, probs_unlabeled, probs_labeled, k_neighbors);
    return rank_rows(probs_unlabeled, scores, m, std::greater<>{}, "pool-cal");
}

} // namespace alpet

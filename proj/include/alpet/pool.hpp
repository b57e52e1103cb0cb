#pragma once

#include "alpet/matrix.hpp"
#include "alpet/rng.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace alpet {

// 0 = no citation, 1 = citation needed.
using Label = int;
inline constexpr Label kNoCitation = 0;
inline constexpr Label kCitationNeeded = 1;

struct SentenceRecord {
    std::string id;
    std::string text;
    std::optional<Label> gold_label;
    std::string language = "synthetic";

    friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

// Finite n x d matrix whose row i belongs to pool record i.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    explicit EmbeddingMatrix(Matrix values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t dim() const noexcept { return values_.cols(); }
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    const Matrix& matrix() const noexcept { return values_; }

private:
    Matrix values_;
};

struct SelectionBatch {
    std::vector<std::size_t> indices;
    std::string strategy;
    std::size_t iteration = 0;
};

// The active-learning universe. Records and embeddings never change after
// construction; only the labeled/unlabeled partition moves, and only through
// reveal_labels.
class Pool {
public:
    Pool(std::vector<SentenceRecord> records, EmbeddingMatrix embeddings);

    std::size_t size() const noexcept { return records_.size(); }
    const std::vector<SentenceRecord>& records() const noexcept { return records_; }
    const SentenceRecord& record(std::size_t i) const { return records_.at(i); }
    const EmbeddingMatrix& embeddings() const noexcept { return embeddings_; }
    std::span<const double> embedding(std::size_t i) const { return embeddings_.row(i); }

    bool is_labeled(std::size_t i) const { return labeled_flags_.at(i) != 0; }
    // Both lists are in ascending index order.
    std::vector<std::size_t> labeled() const;
    std::vector<std::size_t> unlabeled() const;
    std::size_t labeled_count() const noexcept { return labeled_count_; }
    std::size_t unlabeled_count() const noexcept { return size() - labeled_count_; }

    // Oracle simulation: validates the whole batch first, then moves every
    // index to the labeled side and returns its gold label.
    std::vector<std::pair<std::size_t, Label>> reveal_labels(const SelectionBatch& batch);

private:
    std::vector<SentenceRecord> records_;
    EmbeddingMatrix embeddings_;
    std::vector<unsigned char> labeled_flags_;
    std::size_t labeled_count_ = 0;
};

// JSON-lines sentence file: {"id", "text", "label"?, "language"} per line.
std::vector<SentenceRecord> read_sentences(const std::filesystem::path& path);
void write_sentences(const std::filesystem::path& path, std::span<const SentenceRecord> records);

// Reads both files and builds a fully unlabeled pool in file order.
Pool ingest_pool(const std::filesystem::path& dataset, const std::filesystem::path& embeddings);

std::vector<std::pair<std::size_t, Label>> reveal_labels(Pool& pool, const SelectionBatch& batch);

// m distinct unlabeled indices, uniformly drawn.
SelectionBatch select_random(const Pool& pool, std::size_t m, RngStream& rng);

// Throws capacity error unless 1 <= m <= available (m == 0 allowed when allow_zero).
void check_budget(std::size_t m, std::size_t available, bool allow_zero = true);

} // namespace alpet

#pragma once

#include "alpet/pool.hpp"
#include "alpet/rng.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace alpet {

// Lowercased words split on Unicode whitespace, with leading and trailing
// punctuation stripped; empty results are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

// Sparse l2-normalized TF-IDF vector, entries sorted by term id.
struct TfidfVector {
    std::vector<std::pair<std::uint32_t, double>> entries;

    bool empty() const noexcept { return entries.empty(); }
};

double cosine_similarity(const TfidfVector& a, const TfidfVector& b);

// Raw term counts, idf = ln((1 + N) / (1 + df)) + 1, l2 norm.
class TfidfModel {
public:
    static TfidfModel fit(std::span<const std::string> texts);

    // Terms outside the fitted vocabulary are ignored.
    TfidfVector transform(std::string_view text) const;

    std::size_t vocabulary_size() const noexcept { return idf_.size(); }
    double idf(std::string_view term) const;

private:
    std::unordered_map<std::string, std::uint32_t> vocab_;
    std::vector<double> idf_;
};

std::vector<TfidfVector> tfidf_vectors(std::span<const std::string> texts);

inline constexpr double kDedupThreshold = 0.8;

// Greedy scan in input order; a text is dropped when its similarity to any
// already-kept text is strictly above `threshold`. Fits the model on `texts`.
std::vector<std::size_t> dedup_similar(std::span<const std::string> texts,
                                       double threshold = kDedupThreshold);
std::vector<std::size_t> dedup_similar(std::span<const std::string> texts, const TfidfModel& model,
                                       double threshold = kDedupThreshold);

// Incremental form used by the selection loop: remembers accepted vectors.
class DedupFilter {
public:
    DedupFilter(const TfidfModel& model, double threshold = kDedupThreshold);

    // Returns true and remembers the text when it is not too similar to
    // anything accepted so far.
    bool accept(std::string_view text);
    std::size_t accepted() const noexcept { return kept_.size(); }

private:
    const TfidfModel& model_;
    double threshold_;
    std::vector<TfidfVector> kept_;
    // term id -> positions in kept_ containing it
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings_;
};

using IndicesByClass = std::map<Label, std::vector<std::size_t>>;

// Every class trimmed to the minority size; retained members keep their
// input order.
IndicesByClass balance_undersample(const IndicesByClass& indices_by_class, RngStream& rng);

// Every class trimmed to exactly `per_class` members (shortfall error if a
// class is smaller).
IndicesByClass undersample_to(const IndicesByClass& indices_by_class, std::size_t per_class,
                              RngStream& rng);

struct PlanRound {
    IndicesByClass members; // shuffled order; subset k is a prefix
};

struct RoundPlan {
    std::vector<std::size_t> shot_sizes; // per class, ascending
    std::vector<PlanRound> rounds;

    // Per-class prefix of length shot_sizes[subset], classes concatenated in
    // ascending label order.
    std::vector<std::size_t> subset(std::size_t round, std::size_t subset) const;
};

struct PartitionSpec {
    std::size_t rounds = 6;
    std::size_t subsets = 10;
};

// Shuffles each class, cuts it into `rounds` equal disjoint groups and
// nests `subsets` cumulative prefixes in each group.
RoundPlan partition_rounds(const IndicesByClass& balanced, RngStream& rng,
                           const PartitionSpec& spec = {});

std::string round_plan_to_json(const RoundPlan& plan);
RoundPlan round_plan_from_json(std::string_view json_text);

struct LinguisticProfile {
    std::size_t unique_word_count = 0;
    std::size_t total_tokens = 0;
    double type_token_ratio = 0.0;
    double vocabulary_richness = 0.0; // unique / sqrt(total)
    double avg_words_per_sentence = 0.0;
    double avg_word_length = 0.0;     // code points per token
};

LinguisticProfile linguistic_profile(std::span<const std::string> texts);

} // namespace alpet

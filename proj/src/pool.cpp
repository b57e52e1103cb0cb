#include "alpet/pool.hpp"

#include "alpet/error.hpp"
#include "alpet/matrix_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_set>

namespace alpet {
namespace {

constexpr std::array<std::string_view, 4> kLanguages{"ca", "eu", "sq", "synthetic"};

bool known_language(std::string_view tag) {
    return std::find(kLanguages.begin(), kLanguages.end(), tag) != kLanguages.end();
}

} // namespace

EmbeddingMatrix::EmbeddingMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() > 0 && values_.cols() == 0) {
        fail(Errc::dimension_mismatch, "embedding dimension must be at least 1");
    }
    if (!values_.all_finite()) fail(Errc::non_finite, "embedding matrix has a non-finite entry");
}

Pool::Pool(std::vector<SentenceRecord> records, EmbeddingMatrix embeddings)
    : records_(std::move(records)), embeddings_(std::move(embeddings)),
      labeled_flags_(records_.size(), 0) {
    if (embeddings_.rows() != records_.size()) {
        fail(Errc::count_mismatch, std::to_string(records_.size()) + " sentences but " +
                                       std::to_string(embeddings_.rows()) + " embedding rows");
    }
    std::unordered_set<std::string_view> ids;
    ids.reserve(records_.size());
    for (const auto& r : records_) {
        if (!ids.insert(r.id).second) fail(Errc::duplicate_id, "id '" + r.id + "' appears twice");
        if (r.gold_label && *r.gold_label != 0 && *r.gold_label != 1) {
            fail(Errc::malformed, "record '" + r.id + "' has label " + std::to_string(*r.gold_label));
        }
    }
}

std::vector<std::size_t> Pool::labeled() const {
    std::vector<std::size_t> out;
    out.reserve(labeled_count_);
    for (std::size_t i = 0; i < labeled_flags_.size(); ++i) {
        if (labeled_flags_[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> Pool::unlabeled() const {
    std::vector<std::size_t> out;
    out.reserve(unlabeled_count());
    for (std::size_t i = 0; i < labeled_flags_.size(); ++i) {
        if (!labeled_flags_[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::pair<std::size_t, Label>> Pool::reveal_labels(const SelectionBatch& batch) {
    std::unordered_set<std::size_t> seen;
    for (std::size_t i : batch.indices) {
        if (i >= size()) fail(Errc::invalid_argument, "index " + std::to_string(i) + " outside the pool");
        if (labeled_flags_[i] || !seen.insert(i).second) {
            fail(Errc::already_labeled, "index " + std::to_string(i));
        }
        if (!records_[i].gold_label) {
            fail(Errc::missing_label, "record '" + records_[i].id + "' has no gold label");
        }
    }
    std::vector<std::pair<std::size_t, Label>> out;
    out.reserve(batch.indices.size());
    for (std::size_t i : batch.indices) {
        labeled_flags_[i] = 1;
        ++labeled_count_;
        out.emplace_back(i, *records_[i].gold_label);
    }
    return out;
}

std::vector<SentenceRecord> read_sentences(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    std::vector<SentenceRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = path.string() + ":" + std::to_string(line_no);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            fail(Errc::malformed, where + ": " + e.what());
        }
        if (!obj.is_object()) fail(Errc::malformed, where + ": not a JSON object");
        SentenceRecord rec;
        const auto id = obj.find("id");
        const auto text = obj.find("text");
        if (id == obj.end() || !id->is_string()) fail(Errc::malformed, where + ": missing string 'id'");
        if (text == obj.end() || !text->is_string()) fail(Errc::malformed, where + ": missing string 'text'");
        rec.id = id->get<std::string>();
        rec.text = text->get<std::string>();
        if (const auto label = obj.find("label"); label != obj.end() && !label->is_null()) {
            if (!label->is_number_integer()) fail(Errc::malformed, where + ": 'label' must be 0 or 1");
            const auto v = label->get<long long>();
            if (v != 0 && v != 1) fail(Errc::malformed, where + ": 'label' must be 0 or 1");
            rec.gold_label = static_cast<Label>(v);
        }
        if (const auto lang = obj.find("language"); lang != obj.end()) {
            if (!lang->is_string()) fail(Errc::malformed, where + ": 'language' must be a string");
            rec.language = lang->get<std::string>();
        }
        if (!known_language(rec.language)) {
            fail(Errc::malformed, where + ": unknown language '" + rec.language + "'");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_sentences(const std::filesystem::path& path, std::span<const SentenceRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write " + path.string());
    for (const auto& r : records) {
        nlohmann::ordered_json obj;
        obj["id"] = r.id;
        obj["text"] = r.text;
        if (r.gold_label) obj["label"] = *r.gold_label;
        obj["language"] = r.language;
        out << obj.dump() << '\n';
    }
    if (!out) fail(Errc::io, "write failed for " + path.string());
}

Pool ingest_pool(const std::filesystem::path& dataset, const std::filesystem::path& embeddings) {
    auto records = read_sentences(dataset);
    auto matrix = read_matrix(embeddings, MatrixKind::embedding);
    return Pool(std::move(records), EmbeddingMatrix(std::move(matrix)));
}

std::vector<std::pair<std::size_t, Label>> reveal_labels(Pool& pool, const SelectionBatch& batch) {
    return pool.reveal_labels(batch);
}

void check_budget(std::size_t m, std::size_t available, bool allow_zero) {
    if (!allow_zero && m == 0) fail(Errc::invalid_argument, "batch size must be at least 1");
    if (m > available) {
        fail(Errc::capacity, "requested " + std::to_string(m) + " but only " +
                                 std::to_string(available) + " unlabeled");
    }
}

SelectionBatch select_random(const Pool& pool, std::size_t m, RngStream& rng) {
    auto candidates = pool.unlabeled();
    check_budget(m, candidates.size());
    return {sample_without_replacement(std::move(candidates), m, rng), "random", 0};
}

} // namespace alpet

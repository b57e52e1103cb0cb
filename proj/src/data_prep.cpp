#include "alpet/data_prep.hpp"

#include "alpet/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace alpet {
namespace {

// Decodes one code point at `pos`, advancing it. Invalid bytes decode as
// U+FFFD one byte at a time.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    auto cont = [&](std::size_t k) -> int {
        if (pos + k >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[pos + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++pos;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const int c = cont(static_cast<std::size_t>(k));
        if (c < 0) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | static_cast<char32_t>(c);
    }
    pos += static_cast<std::size_t>(len);
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_space(char32_t cp) {
    return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
           (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
           cp == 0x3000;
}

bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
               (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x37E: case 0x387: case 0x3001: case 0x3002: case 0x3003: case 0xFF0C: case 0xFF0E:
        return true;
    default:
        break;
    }
    return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) || (cp >= 0x2E00 && cp <= 0x2E4F);
}

// Case folding for ASCII, Latin-1, Latin Extended-A, basic Greek and
// Cyrillic; everything else passes through.
char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
    if (cp >= 0x100 && cp <= 0x17F) {
        if (cp == 0x130) return 'i';
        if (cp == 0x178) return 0xFF;
        if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp % 2 == 1) ? cp + 1 : cp;
        if (cp == 0x138 || cp == 0x149 || cp == 0x17F) return cp;
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp == 0x386) return 0x3AC;
    if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
    if (cp == 0x38C) return 0x3CC;
    if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

void flush_word(std::vector<char32_t>& word, std::vector<std::string>& out) {
    std::size_t begin = 0;
    std::size_t end = word.size();
    while (begin < end && is_punct(word[begin])) ++begin;
    while (end > begin && is_punct(word[end - 1])) --end;
    if (begin < end) {
        std::string token;
        for (std::size_t i = begin; i < end; ++i) append_utf8(token, to_lower(word[i]));
        out.push_back(std::move(token));
    }
    word.clear();
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::vector<char32_t> word;
    for (std::size_t pos = 0; pos < text.size();) {
        const char32_t cp = next_code_point(text, pos);
        if (is_space(cp)) {
            flush_word(word, out);
        } else {
            word.push_back(cp);
        }
    }
    flush_word(word, out);
    return out;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < text.size(); ++n) next_code_point(text, pos);
    return n;
}

double cosine_similarity(const TfidfVector& a, const TfidfVector& b) {
    double s = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            s += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return s;
}

TfidfModel TfidfModel::fit(std::span<const std::string> texts) {
    if (texts.empty()) fail(Errc::empty_set, "TF-IDF needs a non-empty corpus");
    TfidfModel model;
    std::vector<std::size_t> df;
    for (const auto& text : texts) {
        auto tokens = tokenize(text);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (auto& t : tokens) {
            const auto [it, inserted] = model.vocab_.try_emplace(std::move(t), static_cast<std::uint32_t>(df.size()));
            if (inserted) df.push_back(0);
            ++df[it->second];
        }
    }
    const double n = static_cast<double>(texts.size());
    model.idf_.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i) {
        model.idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
    }
    return model;
}

TfidfVector TfidfModel::transform(std::string_view text) const {
    std::vector<std::uint32_t> ids;
    for (const auto& t : tokenize(text)) {
        if (const auto it = vocab_.find(t); it != vocab_.end()) ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    TfidfVector v;
    for (std::size_t i = 0; i < ids.size();) {
        std::size_t j = i;
        while (j < ids.size() && ids[j] == ids[i]) ++j;
        v.entries.emplace_back(ids[i], static_cast<double>(j - i) * idf_[ids[i]]);
        i = j;
    }
    double norm = 0.0;
    for (const auto& [id, w] : v.entries) norm += w * w;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (auto& e : v.entries) e.second /= norm;
    }
    return v;
}

double TfidfModel::idf(std::string_view term) const {
    const auto it = vocab_.find(std::string(term));
    if (it == vocab_.end()) fail(Errc::invalid_argument, "term '" + std::string(term) + "' not in vocabulary");
    return idf_[it->second];
}

std::vector<TfidfVector> tfidf_vectors(std::span<const std::string> texts) {
    const auto model = TfidfModel::fit(texts);
    std::vector<TfidfVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(model.transform(t));
    return out;
}

DedupFilter::DedupFilter(const TfidfModel& model, double threshold) : model_(model), threshold_(threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) fail(Errc::invalid_argument, "dedup threshold must lie in (0, 1]");
}

bool DedupFilter::accept(std::string_view text) {
    auto v = model_.transform(text);
    // Only kept vectors sharing a term can have positive similarity.
    std::vector<std::uint32_t> shared;
    for (const auto& [id, w] : v.entries) {
        if (const auto it = postings_.find(id); it != postings_.end()) {
            shared.insert(shared.end(), it->second.begin(), it->second.end());
        }
    }
    std::sort(shared.begin(), shared.end());
    shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
    for (std::uint32_t k : shared) {
        if (cosine_similarity(v, kept_[k]) > threshold_) return false;
    }
    const auto pos = static_cast<std::uint32_t>(kept_.size());
    for (const auto& [id, w] : v.entries) postings_[id].push_back(pos);
    kept_.push_back(std::move(v));
    return true;
}

std::vector<std::size_t> dedup_similar(std::span<const std::string> texts, const TfidfModel& model, double threshold) {
    DedupFilter filter(model, threshold);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (filter.accept(texts[i])) kept.push_back(i);
    }
    return kept;
}

std::vector<std::size_t> dedup_similar(std::span<const std::string> texts, double threshold) {
    if (texts.empty()) return {};
    return dedup_similar(texts, TfidfModel::fit(texts), threshold);
}

IndicesByClass undersample_to(const IndicesByClass& indices_by_class, std::size_t per_class, RngStream& rng) {
    if (indices_by_class.size() < 2) fail(Errc::missing_class, "balancing needs at least two classes");
    IndicesByClass out;
    for (const auto& [label, members] : indices_by_class) {
        if (members.empty()) fail(Errc::missing_class, "class " + std::to_string(label) + " is empty");
        if (members.size() < per_class) {
            fail(Errc::shortfall, "class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                                      " members, needs " + std::to_string(per_class));
        }
        if (members.size() == per_class) {
            out[label] = members;
            continue;
        }
        auto stream = rng.child("class/" + std::to_string(label));
        std::vector<std::size_t> positions(members.size());
        for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
        positions = sample_without_replacement(std::move(positions), per_class, stream);
        std::sort(positions.begin(), positions.end());
        auto& kept = out[label];
        kept.reserve(per_class);
        for (std::size_t p : positions) kept.push_back(members[p]);
    }
    return out;
}

IndicesByClass balance_undersample(const IndicesByClass& indices_by_class, RngStream& rng) {
    if (indices_by_class.size() < 2) fail(Errc::missing_class, "balancing needs at least two classes");
    std::size_t minority = SIZE_MAX;
    for (const auto& [label, members] : indices_by_class) {
        if (members.empty()) fail(Errc::missing_class, "class " + std::to_string(label) + " is empty");
        minority = std::min(minority, members.size());
    }
    return undersample_to(indices_by_class, minority, rng);
}

std::vector<std::size_t> RoundPlan::subset(std::size_t round, std::size_t subset) const {
    const auto& r = rounds.at(round);
    const std::size_t take = shot_sizes.at(subset);
    std::vector<std::size_t> out;
    for (const auto& [label, members] : r.members) out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    return out;
}

RoundPlan partition_rounds(const IndicesByClass& balanced, RngStream& rng, const PartitionSpec& spec) {
    if (spec.rounds == 0 || spec.subsets == 0) fail(Errc::invalid_argument, "rounds and subsets must be positive");
    if (balanced.size() < 2) fail(Errc::missing_class, "partitioning needs at least two classes");
    const std::size_t per_class = balanced.begin()->second.size();
    for (const auto& [label, members] : balanced) {
        if (members.size() != per_class) fail(Errc::invalid_argument, "partition input is not balanced");
    }
    if (per_class == 0 || per_class % spec.rounds != 0) {
        fail(Errc::invalid_argument, std::to_string(per_class) + " per class is not divisible into " +
                                         std::to_string(spec.rounds) + " rounds");
    }
    const std::size_t group = per_class / spec.rounds;
    if (group % spec.subsets != 0) {
        fail(Errc::invalid_argument, std::to_string(group) + " per round is not divisible into " +
                                         std::to_string(spec.subsets) + " subsets");
    }
    RoundPlan plan;
    const std::size_t step = group / spec.subsets;
    for (std::size_t k = 1; k <= spec.subsets; ++k) plan.shot_sizes.push_back(k * step);
    plan.rounds.resize(spec.rounds);
    for (const auto& [label, members] : balanced) {
        auto shuffled = members;
        auto stream = rng.child("class/" + std::to_string(label));
        shuffle(shuffled, stream);
        for (std::size_t r = 0; r < spec.rounds; ++r) {
            const auto first = shuffled.begin() + static_cast<std::ptrdiff_t>(r * group);
            plan.rounds[r].members[label].assign(first, first + static_cast<std::ptrdiff_t>(group));
        }
    }
    return plan;
}

std::string round_plan_to_json(const RoundPlan& plan) {
    nlohmann::ordered_json doc;
    doc["shot_sizes"] = plan.shot_sizes;
    auto rounds = nlohmann::ordered_json::array();
    for (const auto& r : plan.rounds) {
        nlohmann::ordered_json members = nlohmann::ordered_json::object();
        for (const auto& [label, idx] : r.members) members[std::to_string(label)] = idx;
        rounds.push_back({{"members", members}});
    }
    doc["rounds"] = std::move(rounds);
    return doc.dump(2);
}

RoundPlan round_plan_from_json(std::string_view json_text) {
    RoundPlan plan;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        plan.shot_sizes = doc.at("shot_sizes").get<std::vector<std::size_t>>();
        for (const auto& r : doc.at("rounds")) {
            PlanRound round;
            for (const auto& [key, idx] : r.at("members").items()) {
                round.members[std::stoi(key)] = idx.get<std::vector<std::size_t>>();
            }
            plan.rounds.push_back(std::move(round));
        }
    } catch (const std::exception& e) {
        fail(Errc::malformed, std::string("round plan manifest: ") + e.what());
    }
    return plan;
}

LinguisticProfile linguistic_profile(std::span<const std::string> texts) {
    LinguisticProfile p;
    if (texts.empty()) return p;
    std::unordered_set<std::string> unique;
    std::size_t chars = 0;
    for (const auto& text : texts) {
        for (auto& t : tokenize(text)) {
            chars += utf8_length(t);
            ++p.total_tokens;
            unique.insert(std::move(t));
        }
    }
    p.unique_word_count = unique.size();
    p.avg_words_per_sentence = static_cast<double>(p.total_tokens) / static_cast<double>(texts.size());
    if (p.total_tokens > 0) {
        const double total = static_cast<double>(p.total_tokens);
        p.type_token_ratio = static_cast<double>(p.unique_word_count) / total;
        p.vocabulary_richness = static_cast<double>(p.unique_word_count) / std::sqrt(total);
        p.avg_word_length = static_cast<double>(chars) / total;
    }
    return p;
}

} // namespace alpet

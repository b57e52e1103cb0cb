#include "alpet/pvp.hpp"

#include "alpet/error.hpp"

#include "pvp_catalog_data.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace alpet::pvp {
namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t count = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

} // namespace

void validate(const Pattern& pattern) {
    const auto texts = count_occurrences(pattern.template_text, kTextPlaceholder);
    const auto masks = count_occurrences(pattern.template_text, kMaskPlaceholder);
    if (texts != 1 || masks != 1) {
        fail(Errc::malformed, "pattern " + pattern.language + "/" + std::to_string(pattern.pattern_id) + " has " +
                                  std::to_string(texts) + " {text_a} and " + std::to_string(masks) + " {mask} placeholders");
    }
}

void validate(const Verbalizer& verbalizer) {
    if (verbalizer.tokens[0].empty() || verbalizer.tokens[1].empty()) {
        fail(Errc::malformed, "verbalizer must map both labels");
    }
    if (verbalizer.tokens[0] == verbalizer.tokens[1]) fail(Errc::malformed, "verbalizer tokens must differ");
}

const PatternCatalog& PatternCatalog::builtin() {
    static const PatternCatalog catalog = from_json(detail::kBuiltinCatalogJson);
    return catalog;
}

PatternCatalog PatternCatalog::from_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::malformed, std::string("pattern catalog: ") + e.what());
    }
    PatternCatalog out;
    try {
        for (const auto& lang : doc.at("languages")) {
            const auto code = lang.at("language").get<std::string>();
            Verbalizer v{{lang.at("verbalizer").at("0").get<std::string>(), lang.at("verbalizer").at("1").get<std::string>()}};
            validate(v);
            if (!out.verbalizers_.emplace(code, std::move(v)).second) {
                fail(Errc::malformed, "pattern catalog lists language '" + code + "' twice");
            }
            for (const auto& p : lang.at("patterns")) {
                Pattern pattern{code, p.at("id").get<int>(), p.at("template").get<std::string>()};
                validate(pattern);
                out.patterns_.push_back(std::move(pattern));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::malformed, std::string("pattern catalog: ") + e.what());
    }
    return out;
}

PatternCatalog PatternCatalog::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

const Pattern& PatternCatalog::pattern(std::string_view language, int pattern_id) const {
    for (const auto& p : patterns_) {
        if (p.language == language && p.pattern_id == pattern_id) return p;
    }
    fail(Errc::invalid_argument, "no pattern " + std::string(language) + "/" + std::to_string(pattern_id));
}

const Verbalizer& PatternCatalog::verbalizer(std::string_view language) const {
    const auto it = verbalizers_.find(language);
    if (it == verbalizers_.end()) fail(Errc::invalid_argument, "no verbalizer for '" + std::string(language) + "'");
    return it->second;
}

std::vector<std::string> PatternCatalog::languages() const {
    std::vector<std::string> out;
    for (const auto& [code, v] : verbalizers_) out.push_back(code);
    return out;
}

std::string build_cloze(const Pattern& pattern, std::string_view text) {
    validate(pattern);
    if (text.empty()) fail(Errc::invalid_argument, "cloze text must be non-empty");
    if (text.find(kMaskToken) != std::string_view::npos) {
        fail(Errc::invalid_argument, "input text already contains the mask token");
    }
    const std::string_view tmpl = pattern.template_text;
    std::string out;
    out.reserve(tmpl.size() + text.size());
    for (std::size_t pos = 0; pos < tmpl.size();) {
        if (tmpl.substr(pos, kTextPlaceholder.size()) == kTextPlaceholder) {
            out += text;
            pos += kTextPlaceholder.size();
        } else if (tmpl.substr(pos, kMaskPlaceholder.size()) == kMaskPlaceholder) {
            out += kMaskToken;
            pos += kMaskPlaceholder.size();
        } else {
            out += tmpl[pos++];
        }
    }
    return out;
}

std::array<double, 2> score_labels(const Pattern& pattern, const Verbalizer& verbalizer, std::string_view text,
                                   const TokenProbProvider& provider) {
    validate(verbalizer);
    const std::string cloze = build_cloze(pattern, text);
    if (!provider) fail(Errc::provider, "no token probability provider");
    std::vector<double> scores;
    try {
        scores = provider(cloze, verbalizer.tokens);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(Errc::provider, e.what());
    }
    if (scores.size() != 2) {
        fail(Errc::provider, "provider returned " + std::to_string(scores.size()) + " scores for 2 tokens");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) fail(Errc::provider, "provider returned a non-finite score");
        if (s < 0.0) fail(Errc::provider, "provider returned a negative score");
    }
    const double total = scores[0] + scores[1];
    if (total == 0.0) return {0.5, 0.5};
    return {scores[0] / total, scores[1] / total};
}

Label predict_label(const Pattern& pattern, const Verbalizer& verbalizer, std::string_view text,
                    const TokenProbProvider& provider) {
    const auto dist = score_labels(pattern, verbalizer, text, provider);
    return dist[1] > dist[0] ? kCitationNeeded : kNoCitation;
}

TokenProbProvider fixed_provider(std::map<std::string, double, std::less<>> scores) {
    return [scores = std::move(scores)](std::string_view, std::span<const std::string> tokens) {
        std::vector<double> out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) {
            const auto it = scores.find(t);
            out.push_back(it == scores.end() ? 0.0 : it->second);
        }
        return out;
    };
}

} // namespace alpet::pvp

#pragma once

#include "alpet/pool.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alpet::pvp {

inline constexpr std::string_view kTextPlaceholder = "{text_a}";
inline constexpr std::string_view kMaskPlaceholder = "{mask}";
inline constexpr std::string_view kMaskToken = "[mask]";

struct Pattern {
    std::string language;
    int pattern_id = 0;
    std::string template_text;
};

// Throws unless the template holds exactly one of each placeholder.
void validate(const Pattern& pattern);

struct Verbalizer {
    std::array<std::string, 2> tokens; // indexed by label

    const std::string& token(Label label) const { return tokens.at(static_cast<std::size_t>(label)); }
};

void validate(const Verbalizer& verbalizer);

// Scores for each requested token given the cloze text. Scores must be
// finite and non-negative.
using TokenProbProvider =
    std::function<std::vector<double>(std::string_view cloze, std::span<const std::string> tokens)>;

class PatternCatalog {
public:
    // Catalog compiled into the library.
    static const PatternCatalog& builtin();
    static PatternCatalog from_json(std::string_view json_text);
    static PatternCatalog load(const std::filesystem::path& path);

    const Pattern& pattern(std::string_view language, int pattern_id) const;
    const Verbalizer& verbalizer(std::string_view language) const;
    std::vector<std::string> languages() const;
    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }

private:
    std::vector<Pattern> patterns_;
    std::map<std::string, Verbalizer, std::less<>> verbalizers_;
};

std::string build_cloze(const Pattern& pattern, std::string_view text);

// Provider scores of the two verbalizer tokens normalized to sum to one;
// (0.5, 0.5) when both are zero.
std::array<double, 2> score_labels(const Pattern& pattern, const Verbalizer& verbalizer,
                                   std::string_view text, const TokenProbProvider& provider);

// argmax of score_labels, exact tie -> 0.
Label predict_label(const Pattern& pattern, const Verbalizer& verbalizer, std::string_view text,
                    const TokenProbProvider& provider);

// Provider returning a fixed score per token (unknown tokens score 0).
TokenProbProvider fixed_provider(std::map<std::string, double, std::less<>> scores);

} // namespace alpet::pvp

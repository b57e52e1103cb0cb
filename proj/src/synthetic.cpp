#include "alpet/synthetic.hpp"

#include "alpet/error.hpp"

#include <array>
#include <cstdio>

namespace alpet {
namespace {

std::string pseudo_word(std::size_t id) {
    static constexpr std::array<const char*, 16> syllables{"ka", "lo", "mi", "nu", "pe", "ra", "si", "to",
                                                           "ve", "zu", "ba", "de", "fo", "gi", "ho", "ju"};
    std::string w;
    do {
        w += syllables[id % syllables.size()];
        id /= syllables.size();
    } while (id > 0);
    return w + "x";
}

} // namespace

SyntheticPool make_two_gaussian(const SyntheticSpec& spec, RngStream& rng) {
    if (spec.dim == 0 || spec.vocabulary == 0 || spec.words_per_text == 0) {
        fail(Errc::invalid_argument, "synthetic spec needs positive dim, vocabulary and words_per_text");
    }
    auto points = rng.child("points");
    auto words = rng.child("words");
    SyntheticPool out;
    out.records.reserve(spec.n);
    Matrix values(spec.n, spec.dim, 0.0);
    char id[32];
    for (std::size_t i = 0; i < spec.n; ++i) {
        const Label label = static_cast<Label>(i % 2);
        const double centre = label == kCitationNeeded ? spec.offset : -spec.offset;
        auto row = values.row(i);
        for (std::size_t j = 0; j < spec.dim; ++j) {
            row[j] = static_cast<double>(static_cast<float>(centre + points.normal()));
        }
        std::string text;
        for (std::size_t w = 0; w < spec.words_per_text; ++w) {
            if (w) text += ' ';
            text += pseudo_word(static_cast<std::size_t>(words.uniform_index(spec.vocabulary)));
        }
        text += '.';
        std::snprintf(id, sizeof id, "syn-%06zu", i);
        out.records.push_back({id, std::move(text), label, spec.language});
    }
    out.embeddings = EmbeddingMatrix(std::move(values));
    return out;
}

} // namespace alpet

#pragma once

#include "alpet/pool.hpp"
#include "alpet/rng.hpp"

#include <cstddef>
#include <vector>

namespace alpet {

// Two isotropic unit-variance Gaussians centred at -offset and +offset on
// every coordinate. Label i % 2, so classes are exactly balanced for even n.
// Texts are random bags of pseudo-words, rarely similar enough to dedup.
struct SyntheticSpec {
    std::size_t n = 20000;
    std::size_t dim = 16;
    double offset = 0.26;
    std::size_t words_per_text = 12;
    std::size_t vocabulary = 4000;
    std::string language = "synthetic";
};

struct SyntheticPool {
    std::vector<SentenceRecord> records;
    EmbeddingMatrix embeddings; // values already representable as f32
};

SyntheticPool make_two_gaussian(const SyntheticSpec& spec, RngStream& rng);

} // namespace alpet

#pragma once

#include <array>
#include <cstdint>

#include "sdd/corpus.hpp"

namespace sdd {

// Seeded generator of pseudo-term corpora for desk-scale runs.  Each class
// owns a disjoint set of marker terms drawn with elevated probability on top
// of a shared background vocabulary.  Terms are synthetic strings over a
// closed Sorani-letter alphabet, so no real text is fabricated and the
// cleaning pipeline passes them through unchanged.
struct SyntheticSpec {
    std::array<std::size_t, kNumLabels> class_counts = {300, 300, 60};
    std::size_t vocab_size = 500;
    std::size_t markers_per_class = 30;
    double marker_weight = 0.65;  // probability a token is an own-class marker
    std::size_t doc_len_min = 8;
    std::size_t doc_len_max = 16;
    std::uint64_t seed = 42;
};

LabeledCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

// The pseudo-term for a vocabulary slot; exposed for tests that need to know
// which terms are class markers (slots [class*markers_per_class, ...)).
std::string synthetic_term(std::size_t index);

}  // namespace sdd

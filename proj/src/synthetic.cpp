#include "sdd/synthetic.hpp"

#include <string>

#include "sdd/errors.hpp"
#include "sdd/rng.hpp"
#include "sdd/utf8.hpp"

namespace sdd {

namespace {

// Thirty Sorani letters, all fixed points of the default normalization table
// and untouched by the noise-stripping rules.
constexpr std::array<char32_t, 30> kAlphabet = {
    0x0627, 0x0628, 0x067E, 0x062A, 0x062C, 0x0686, 0x062D, 0x062E, 0x062F, 0x0631,
    0x0695, 0x0632, 0x0698, 0x0633, 0x0634, 0x0639, 0x063A, 0x0641, 0x06A4, 0x0642,
    0x06A9, 0x06AF, 0x0644, 0x06B5, 0x0645, 0x0646, 0x06BE, 0x06D5, 0x0648, 0x06CC,
};

}  // namespace

std::string synthetic_term(std::size_t index) {
    // fixed-width base-30 encoding; three letters cover 27,000 slots
    std::array<std::size_t, 3> digit = {0, 0, 0};
    std::size_t v = index;
    for (std::size_t pos = 0; pos < digit.size(); ++pos) {
        digit[digit.size() - 1 - pos] = v % kAlphabet.size();
        v /= kAlphabet.size();
    }
    if (v != 0) raise(ErrorCode::InvalidSpec, "term index " + std::to_string(index) + " too large");
    std::string term;
    for (std::size_t d : digit) append_utf8(term, kAlphabet[d]);
    return term;
}

LabeledCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
    for (std::size_t count : spec.class_counts) {
        if (count == 0) raise(ErrorCode::InvalidSpec, "every class count must be positive");
    }
    const std::size_t marker_slots = spec.markers_per_class * kNumLabels;
    if (spec.vocab_size == 0 || marker_slots >= spec.vocab_size) {
        raise(ErrorCode::InvalidSpec,
              "vocab_size must exceed markers_per_class * " + std::to_string(kNumLabels));
    }
    if (spec.doc_len_min == 0 || spec.doc_len_min > spec.doc_len_max) {
        raise(ErrorCode::InvalidSpec, "document length range is empty");
    }
    if (spec.marker_weight < 0.0 || spec.marker_weight > 1.0) {
        raise(ErrorCode::InvalidSpec, "marker_weight must be within [0,1]");
    }

    const std::size_t background_slots = spec.vocab_size - marker_slots;
    Rng rng(spec.seed);
    LabeledCorpus corpus;
    corpus.provenance = "synthetic(seed=" + std::to_string(spec.seed) + ")";

    std::size_t serial = 0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        for (std::size_t d = 0; d < spec.class_counts[c]; ++d) {
            const std::size_t len =
                spec.doc_len_min +
                uniform_below(rng, spec.doc_len_max - spec.doc_len_min + 1);
            std::string text;
            for (std::size_t t = 0; t < len; ++t) {
                std::size_t slot;
                if (uniform_unit(rng) < spec.marker_weight) {
                    slot = c * spec.markers_per_class +
                           uniform_below(rng, spec.markers_per_class);
                } else {
                    slot = marker_slots + uniform_below(rng, background_slots);
                }
                if (!text.empty()) text.push_back(' ');
                text += synthetic_term(slot);
            }
            std::string id = "synth-" + std::to_string(serial++);
            corpus.posts.push_back(
                {std::move(id), std::move(text), static_cast<Label>(c)});
        }
    }
    return corpus;
}

}  // namespace sdd

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sdd/text.hpp"

namespace sdd {

// Identifies the weighting scheme; echoed in model files and reports.
inline constexpr std::string_view kTfidfVariantTag = "tf-raw.idf-ln1p-smooth.l2";

struct Vocabulary {
    std::unordered_map<std::string, std::uint32_t> term_to_index;
    std::vector<std::string> index_to_term;
    std::vector<std::uint32_t> doc_freq;
    std::uint64_t n_docs = 0;

    std::uint32_t size() const { return static_cast<std::uint32_t>(index_to_term.size()); }

    // idf(t) = ln((1+N)/(1+df)) + 1
    double idf(std::uint32_t index) const;

    void write_tsv(std::ostream& out) const;
    void write_tsv(const std::filesystem::path& path) const;
    static Vocabulary read_tsv(std::istream& in);
};

// Sparse row vector: strictly increasing indices, nonzero weights.
struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;

    bool empty() const { return entries.empty(); }
    double l2_norm() const;
    double dot(const SparseVector& other) const;
};

struct FeatureMatrix {
    std::vector<SparseVector> rows;
    std::uint32_t n_cols = 0;

    std::size_t n_rows() const { return rows.size(); }
};

// Terms indexed in first-appearance order; terms below min_df dropped.
Vocabulary fit_vocabulary(std::span<const TokenSequence> docs, std::uint32_t min_df = 1);

// Raw-count tf times smoothed idf, then L2 normalization.  Out-of-vocabulary
// tokens are ignored; an all-OOV doc yields the empty vector.
SparseVector tfidf_transform(const TokenSequence& doc, const Vocabulary& vocab);

FeatureMatrix tfidf_transform_matrix(std::span<const TokenSequence> docs,
                                     const Vocabulary& vocab);

std::pair<Vocabulary, FeatureMatrix> tfidf_fit_transform(
    std::span<const TokenSequence> docs, std::uint32_t min_df = 1);

}  // namespace sdd

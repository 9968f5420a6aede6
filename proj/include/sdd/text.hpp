#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdd/corpus.hpp"
#include "sdd/label.hpp"

namespace sdd {

using TokenSequence = std::vector<std::string>;

// Maps Perso-Arabic script variants to canonical Sorani codepoints and lists
// codepoints to delete outright.  All map outputs are fixed points of the
// table, so applying it twice equals applying it once.
struct NormalizationTable {
    std::map<char32_t, std::u32string> char_map;
    std::set<char32_t> strip_set;

    static const NormalizationTable& defaults();

    // Two-column mapping file: "from_hex,to_hex" per line, empty to_hex
    // meaning deletion.  '#' starts a comment.
    static NormalizationTable from_file(const std::filesystem::path& path);
    void write_file(const std::filesystem::path& path) const;
};

std::string normalize_script(std::string_view text);
std::string normalize_script(std::string_view text, const NormalizationTable& table);

// Counts of fragments removed by each cleaning rule.
struct NoiseStats {
    std::size_t urls = 0;
    std::size_t mentions = 0;
    std::size_t latin = 0;
    std::size_t emoji = 0;
    std::size_t digits = 0;
    std::size_t punctuation = 0;

    NoiseStats& operator+=(const NoiseStats& other);
};

// Removes, in order: URLs, @-mentions, Basic-Latin letter runs, emoji,
// digits (ASCII and Arabic-Indic), punctuation; then collapses whitespace
// runs to single spaces and trims.
std::string strip_noise(std::string_view text, NoiseStats* stats = nullptr);

// Whitespace split; never produces empty tokens.
TokenSequence tokenize(std::string_view text);

struct ProcessedDoc {
    std::string id;
    Label label;
    TokenSequence tokens;
};

struct PreprocessStats {
    NoiseStats noise;
    std::size_t duplicates = 0;
    std::size_t empty = 0;
    std::size_t dropped() const { return duplicates + empty; }
};

struct ProcessedCorpus {
    std::vector<ProcessedDoc> docs;
    PreprocessStats stats;
};

struct PreprocessOptions {
    bool normalize = true;
    bool strip = true;
    bool drop_empty = true;
    bool dedup = true;
    const NormalizationTable* table = nullptr;  // null = embedded defaults
};

// normalize -> strip -> tokenize per post, then drops empty docs and exact
// duplicate token sequences (first occurrence wins).  Requires labels.
ProcessedCorpus preprocess_corpus(const LabeledCorpus& corpus,
                                  const PreprocessOptions& options = {});

// Character class predicates backing strip_noise; exposed for tests.
bool is_punctuation_cp(char32_t cp);
bool is_emoji_cp(char32_t cp);
bool is_digit_cp(char32_t cp);
bool is_space_cp(char32_t cp);

}  // namespace sdd

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdd/label.hpp"

namespace sdd {

struct RawPost {
    std::string id;
    std::string text;
    std::optional<Label> label;
};

// Ordered, immutable-once-loaded collection of posts.  Input order is
// preserved by every operation that returns a corpus.
struct LabeledCorpus {
    std::vector<RawPost> posts;
    std::string provenance;

    std::size_t size() const { return posts.size(); }
    bool empty() const { return posts.empty(); }
    bool fully_labeled() const;
};

enum class CorpusFormat { Csv, Jsonl };

CorpusFormat corpus_format_from_name(std::string_view name);
std::string_view corpus_format_name(CorpusFormat format);

LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
void write_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format);

// Counts per class, indexed by label code.  Requires every post labeled.
std::array<std::size_t, kNumLabels> class_counts(const LabeledCorpus& corpus);

// Search keywords used to narrow a corpus to on-topic posts.
struct KeywordSet {
    std::vector<std::string> keywords;

    // The embedded default set of ten Sorani depression-related terms.
    static const KeywordSet& defaults();
    // One keyword per line, '#' comments and blank lines ignored.
    static KeywordSet from_file(const std::filesystem::path& path);
};

// Keeps posts whose script-normalized text contains at least one normalized
// keyword as a substring.  Order preserved; idempotent.
LabeledCorpus filter_by_keywords(const LabeledCorpus& corpus, const KeywordSet& keywords);

}  // namespace sdd

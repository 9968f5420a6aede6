#include "sdd/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sdd/errors.hpp"

namespace sdd {

double SparseVector::l2_norm() const {
    double sum = 0.0;
    for (const auto& [idx, value] : entries) sum += value * value;
    return std::sqrt(sum);
}

double SparseVector::dot(const SparseVector& other) const {
    double sum = 0.0;
    auto a = entries.begin();
    auto b = other.entries.begin();
    while (a != entries.end() && b != other.entries.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            sum += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return sum;
}

double Vocabulary::idf(std::uint32_t index) const {
    return std::log((1.0 + static_cast<double>(n_docs)) /
                    (1.0 + static_cast<double>(doc_freq[index]))) +
           1.0;
}

Vocabulary fit_vocabulary(std::span<const TokenSequence> docs, std::uint32_t min_df) {
    if (docs.empty()) raise(ErrorCode::EmptyCorpus, "cannot fit vocabulary on zero documents");

    // Terms in first-appearance order with document frequencies.
    struct TermInfo {
        std::uint32_t df = 0;
        std::size_t last_doc = SIZE_MAX;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, TermInfo> info;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& token : docs[d]) {
            auto [it, inserted] = info.try_emplace(token);
            if (inserted) order.push_back(token);
            if (it->second.last_doc != d) {
                it->second.last_doc = d;
                ++it->second.df;
            }
        }
    }

    Vocabulary vocab;
    vocab.n_docs = docs.size();
    for (auto& term : order) {
        const std::uint32_t freq = info[term].df;
        if (freq < min_df) continue;
        const auto index = static_cast<std::uint32_t>(vocab.index_to_term.size());
        vocab.term_to_index.emplace(term, index);
        vocab.index_to_term.push_back(std::move(term));
        vocab.doc_freq.push_back(freq);
    }
    if (vocab.index_to_term.empty()) {
        raise(ErrorCode::EmptyVocabulary,
              "no term meets min_df=" + std::to_string(min_df));
    }
    return vocab;
}

SparseVector tfidf_transform(const TokenSequence& doc, const Vocabulary& vocab) {
    std::unordered_map<std::uint32_t, double> tf;
    for (const auto& token : doc) {
        auto it = vocab.term_to_index.find(token);
        if (it != vocab.term_to_index.end()) tf[it->second] += 1.0;
    }

    SparseVector vec;
    vec.entries.reserve(tf.size());
    for (const auto& [index, count] : tf) {
        vec.entries.emplace_back(index, count * vocab.idf(index));
    }
    std::sort(vec.entries.begin(), vec.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const double norm = vec.l2_norm();
    if (norm > 0.0) {
        for (auto& [index, value] : vec.entries) value /= norm;
    }
    return vec;
}

FeatureMatrix tfidf_transform_matrix(std::span<const TokenSequence> docs,
                                     const Vocabulary& vocab) {
    FeatureMatrix matrix;
    matrix.n_cols = vocab.size();
    matrix.rows.reserve(docs.size());
    for (const auto& doc : docs) matrix.rows.push_back(tfidf_transform(doc, vocab));
    return matrix;
}

std::pair<Vocabulary, FeatureMatrix> tfidf_fit_transform(std::span<const TokenSequence> docs,
                                                         std::uint32_t min_df) {
    Vocabulary vocab = fit_vocabulary(docs, min_df);
    FeatureMatrix matrix = tfidf_transform_matrix(docs, vocab);
    return {std::move(vocab), std::move(matrix)};
}

void Vocabulary::write_tsv(std::ostream& out) const {
    out << "#n_docs=" << n_docs << '\n';
    for (std::size_t i = 0; i < index_to_term.size(); ++i) {
        out << index_to_term[i] << '\t' << i << '\t' << doc_freq[i] << '\n';
    }
}

void Vocabulary::write_tsv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open for writing: " + path.string());
    write_tsv(out);
    if (!out) raise(ErrorCode::IoFailure, "write failed: " + path.string());
}

Vocabulary Vocabulary::read_tsv(std::istream& in) {
    Vocabulary vocab;
    std::string line;
    if (!std::getline(in, line)) raise(ErrorCode::MalformedRecord, "vocabulary file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#n_docs=", 0) != 0) {
        raise(ErrorCode::MalformedRecord, "vocabulary file must start with #n_docs=<N>");
    }
    try {
        vocab.n_docs = std::stoull(line.substr(8));
    } catch (const std::exception&) {
        raise(ErrorCode::MalformedRecord, "bad document count: " + line);
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            raise(ErrorCode::MalformedRecord,
                  "vocabulary line " + std::to_string(line_no) + " is not term\\tindex\\tdoc_freq");
        }
        std::string term = line.substr(0, t1);
        unsigned long long index = 0;
        unsigned long long freq = 0;
        try {
            index = std::stoull(line.substr(t1 + 1, t2 - t1 - 1));
            freq = std::stoull(line.substr(t2 + 1));
        } catch (const std::exception&) {
            raise(ErrorCode::MalformedRecord,
                  "vocabulary line " + std::to_string(line_no) + " has a bad number");
        }
        if (index != vocab.index_to_term.size()) {
            raise(ErrorCode::MalformedRecord,
                  "vocabulary indices must be dense and ascending (line " +
                      std::to_string(line_no) + ")");
        }
        if (freq > vocab.n_docs) {
            raise(ErrorCode::MalformedRecord,
                  "doc_freq exceeds n_docs at line " + std::to_string(line_no));
        }
        if (!vocab.term_to_index.emplace(term, static_cast<std::uint32_t>(index)).second) {
            raise(ErrorCode::MalformedRecord,
                  "duplicate term at line " + std::to_string(line_no));
        }
        vocab.index_to_term.push_back(std::move(term));
        vocab.doc_freq.push_back(static_cast<std::uint32_t>(freq));
    }
    if (vocab.index_to_term.empty()) {
        raise(ErrorCode::EmptyVocabulary, "vocabulary file has no terms");
    }
    return vocab;
}

}  // namespace sdd
